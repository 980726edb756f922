#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "hotcold/oracle.hpp"

using namespace hotcold;

namespace {

// Naive recursion with memo: a position is cold iff no move reaches a cold one.
class NaiveSolver {
 public:
  explicit NaiveSolver(GameSpec spec) : spec_(spec), memo_(spec.cell_count(), -1) {}
  bool cold(Position p) {
    int& m = memo_[spec_.index(p)];
    if (m >= 0) return m == 1;
    bool any_cold = false;
    for (Position t : legal_moves(spec_, p)) any_cold = any_cold || cold(t);
    m = any_cold ? 0 : 1;
    return m == 1;
  }

 private:
  GameSpec spec_;
  std::vector<int> memo_;
};

std::set<Position> cold_set(const HotColdTable& t) {
  const auto v = t.positions(Label::cold);
  return {v.begin(), v.end()};
}

}  // namespace

TEST(Retrograde, WythoffN25ColdSet) {
  const std::set<Position> expected{{0, 0},   {1, 2},   {2, 1},   {3, 5},   {5, 3},   {4, 7},   {7, 4},
                                    {6, 10},  {10, 6},  {8, 13},  {13, 8},  {9, 15},  {15, 9},  {11, 18},
                                    {18, 11}, {12, 20}, {20, 12}, {14, 23}, {23, 14}};
  EXPECT_EQ(cold_set(solve_retrograde({Rules::wythoff, 25})), expected);
}

TEST(Retrograde, NimColdIsDiagonal) {
  const auto t = solve_retrograde({Rules::nim, 10});
  std::set<Position> expected;
  for (int k = 0; k < 10; ++k) expected.insert({k, k});
  EXPECT_EQ(cold_set(t), expected);
}

TEST(Retrograde, MatchesNaiveRecursion) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const GameSpec spec{r, 40};
    const auto t = solve_retrograde(spec);
    NaiveSolver naive(spec);
    for (std::size_t i = 0; i < spec.cell_count(); ++i)
      EXPECT_EQ(t.is_cold(spec.at(i)), naive.cold(spec.at(i))) << to_string(r) << to_string(spec.at(i));
  }
}

// Exhaustive structure checks up to N = 100.
TEST(Retrograde, StructureInvariants) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    for (int n : {2, 3, 10, 57, 100}) {
      const GameSpec spec{r, n};
      const auto t = solve_retrograde(spec);
      EXPECT_TRUE(t.is_cold({0, 0}));
      for (std::size_t i = 0; i < spec.cell_count(); ++i) {
        const Position p = spec.at(i);
        const auto targets = optimal_targets(t, p);
        if (t.is_cold(p)) {
          EXPECT_TRUE(targets.empty()) << "cold->cold from " << to_string(p);
        } else {
          EXPECT_FALSE(targets.empty()) << "hot without cold move at " << to_string(p);
        }
      }
    }
  }
}

TEST(Retrograde, SymmetricAndPrefixStable) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const auto small = solve_retrograde({r, 30});
    const auto big = solve_retrograde({r, 60});
    for (int x = 0; x < 30; ++x)
      for (int y = 0; y < 30; ++y) {
        EXPECT_EQ(small.is_cold({x, y}), small.is_cold({y, x}));
        EXPECT_EQ(small.is_cold({x, y}), big.is_cold({x, y}));
      }
  }
}

TEST(Retrograde, AtMostOneColdPerRow) {
  // Each row holds at most one cold cell in Wythoff and Nim (two cold cells
  // in a row would see each other); Euclid is checked by the invariants above.
  for (Rules r : {Rules::wythoff, Rules::nim}) {
    const GameSpec spec{r, 80};
    const auto t = solve_retrograde(spec);
    for (int y = 0; y < 80; ++y) {
      int cold = 0;
      for (int x = 0; x < 80; ++x) cold += t.is_cold({x, y});
      EXPECT_LE(cold, 1);
    }
  }
}

TEST(ClosedForm, Examples) {
  EXPECT_TRUE(wythoff_cold_closed_form({1, 2}));
  EXPECT_TRUE(wythoff_cold_closed_form({2, 1}));
  EXPECT_TRUE(wythoff_cold_closed_form({0, 0}));
  EXPECT_FALSE(wythoff_cold_closed_form({2, 2}));
}

TEST(ClosedForm, MatchesRetrograde) {
  for (int n : {25, 100, 300}) {
    const GameSpec spec{Rules::wythoff, n};
    const auto t = solve_retrograde(spec);
    for (std::size_t i = 0; i < spec.cell_count(); ++i)
      ASSERT_EQ(t.is_cold(spec.at(i)), wythoff_cold_closed_form(spec.at(i))) << to_string(spec.at(i));
  }
}

// Large coordinates, where a double-precision phi would start to drift.
TEST(ClosedForm, BeattyPairsFarOut) {
  const long double phi = (1.0L + std::sqrt(5.0L)) / 2.0L;
  for (int k = 1; k < 20000; k += 7) {
    const int a = static_cast<int>(std::floor(k * phi));
    const int b = a + k;
    EXPECT_TRUE(wythoff_cold_closed_form({a, b})) << k;
    EXPECT_TRUE(wythoff_cold_closed_form({b, a})) << k;
    EXPECT_FALSE(wythoff_cold_closed_form({a, b + 1})) << k;
  }
}

TEST(OptimalTargets, Examples) {
  const auto w = solve_retrograde({Rules::wythoff, 15});
  EXPECT_EQ(optimal_targets(w, {3, 3}), (std::vector<Position>{{0, 0}}));
  EXPECT_TRUE(optimal_targets(w, {1, 2}).empty());
  const auto n = solve_retrograde({Rules::nim, 15});
  EXPECT_EQ(optimal_targets(n, {4, 7}), (std::vector<Position>{{4, 4}}));
}

TEST(ScorePolicy, OptimalChooserScoresOne) {
  const auto t = solve_retrograde({Rules::wythoff, 15});
  const auto hot = t.positions(Label::hot);
  const auto s = score_policy(t, [&](Position p) { return optimal_targets(t, p).front(); }, hot);
  EXPECT_DOUBLE_EQ(s.optimal_fraction, 1.0);
  EXPECT_EQ(s.states_scored, hot.size());
  EXPECT_EQ(s.illegal_choices, 0u);
}

TEST(ScorePolicy, RandomChooserApproachesBaseline) {
  const GameSpec spec{Rules::wythoff, 15};
  const auto t = solve_retrograde(spec);
  const auto hot = t.positions(Label::hot);
  std::mt19937_64 rng(3);
  double sum = 0.0;
  const int reps = 400;
  for (int i = 0; i < reps; ++i) {
    sum += score_policy(t, [&](Position p) {
             const auto m = legal_moves(spec, p);
             return m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)];
           }, hot).optimal_fraction;
  }
  EXPECT_NEAR(sum / reps, random_baseline(t), 0.003);
}

TEST(ScorePolicy, EmptyStates) {
  const auto t = solve_retrograde({Rules::wythoff, 5});
  const auto s = score_policy(t, [](Position p) { return p; }, {});
  EXPECT_EQ(s.states_scored, 0u);
  EXPECT_EQ(s.optimal_fraction, 0.0);
}

TEST(ScorePolicy, IllegalChoiceCountedNotThrown) {
  const auto t = solve_retrograde({Rules::nim, 10});
  const std::vector<Position> states{{5, 5}, {3, 7}};
  const auto s = score_policy(t, [](Position p) { return Position{p.x - 1, p.y - 1}; }, states);
  EXPECT_EQ(s.illegal_choices, 2u);
  EXPECT_EQ(s.optimal_fraction, 0.0);
}

TEST(RandomBaseline, KnownValues) {
  EXPECT_NEAR(random_baseline(solve_retrograde({Rules::wythoff, 15})), 0.0975, 5e-4);
  EXPECT_NEAR(random_baseline(solve_retrograde({Rules::wythoff, 50})), 0.0277, 5e-4);
}

TEST(RandomBaseline, MatchesDirectEnumeration) {
  const GameSpec spec{Rules::euclid, 30};
  const auto t = solve_retrograde(spec);
  double total = 0.0;
  int hot = 0;
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    const Position p = spec.at(i);
    if (t.is_cold(p)) continue;
    const auto m = legal_moves(spec, p);
    int c = 0;
    for (Position q : m) c += t.is_cold(q);
    total += static_cast<double>(c) / m.size();
    ++hot;
  }
  EXPECT_NEAR(random_baseline(t), total / hot, 1e-12);
}
