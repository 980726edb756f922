#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "hotcold/game.hpp"

using namespace hotcold;

namespace {

std::vector<Position> P(std::initializer_list<std::pair<int, int>> xs) {
  std::vector<Position> out;
  for (auto [x, y] : xs) out.push_back({x, y});
  return out;
}

// Independent enumeration straight from the move rules.
std::set<Position> brute_moves(Rules r, Position p) {
  std::set<Position> out;
  for (int x = 0; x <= p.x; ++x) {
    for (int y = 0; y <= p.y; ++y) {
      const Position t{x, y};
      if (t == p) continue;
      const bool row = y == p.y && x < p.x;
      const bool col = x == p.x && y < p.y;
      const bool diag = p.x - x == p.y - y && x < p.x;
      bool ok = false;
      switch (r) {
        case Rules::wythoff: ok = row || col || diag; break;
        case Rules::nim: ok = row || col; break;
        case Rules::euclid: {
          // Subtract a positive multiple of min(a,b) from either coordinate;
          // on an axis any decrement.
          const int lo = std::min(p.x, p.y);
          if (lo == 0) ok = row || col;
          else ok = (row && (p.x - x) % lo == 0) || (col && (p.y - y) % lo == 0);
          break;
        }
      }
      if (ok) out.insert(t);
    }
  }
  return out;
}

}  // namespace

TEST(LegalMoves, WythoffExample) {
  EXPECT_EQ(legal_moves({Rules::wythoff, 15}, {2, 3}), P({{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {2, 2}}));
}

TEST(LegalMoves, TerminalHasNone) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) EXPECT_TRUE(legal_moves({r, 15}, {0, 0}).empty());
}

TEST(LegalMoves, NimExcludesDiagonal) {
  EXPECT_EQ(legal_moves({Rules::nim, 15}, {2, 2}), P({{0, 2}, {1, 2}, {2, 0}, {2, 1}}));
}

TEST(LegalMoves, OffBoardRejected) {
  EXPECT_THROW(legal_moves({Rules::wythoff, 10}, {10, 0}), InvalidInput);
  EXPECT_THROW(legal_moves({Rules::wythoff, 10}, {-1, 3}), InvalidInput);
}

TEST(LegalMoves, SortedAndUnique) {
  const GameSpec spec{Rules::wythoff, 30};
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    const auto m = legal_moves(spec, spec.at(i));
    EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
    EXPECT_EQ(std::adjacent_find(m.begin(), m.end()), m.end());
  }
}

TEST(LegalMoves, MatchesBruteForceAllRules) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const GameSpec spec{r, 25};
    for (std::size_t i = 0; i < spec.cell_count(); ++i) {
      const Position p = spec.at(i);
      const auto m = legal_moves(spec, p);
      const std::set<Position> got(m.begin(), m.end());
      EXPECT_EQ(got, brute_moves(r, p)) << to_string(r) << " " << to_string(p);
    }
  }
}

// Every move strictly decreases x + y, so games end.
TEST(LegalMoves, MovesDecreaseCoordinateSum) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const GameSpec spec{r, 40};
    for (std::size_t i = 0; i < spec.cell_count(); ++i) {
      const Position p = spec.at(i);
      for (Position t : legal_moves(spec, p)) {
        EXPECT_LT(t.x + t.y, p.x + p.y);
        EXPECT_TRUE(spec.on_board(t));
      }
    }
  }
}

TEST(LegalMoves, NonTerminalAlwaysHasAMove) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const GameSpec spec{r, 40};
    for (std::size_t i = 1; i < spec.cell_count(); ++i) EXPECT_FALSE(legal_moves(spec, spec.at(i)).empty());
  }
}

TEST(ApplyMove, Examples) {
  EXPECT_EQ(apply_move({Rules::wythoff, 15}, {{5, 5}, {0, 0}}), (Position{0, 0}));
  EXPECT_EQ(apply_move({Rules::wythoff, 15}, {{2, 3}, {1, 2}}), (Position{1, 2}));
  try {
    apply_move({Rules::nim, 15}, {{5, 5}, {4, 4}});
    FAIL() << "expected IllegalMove";
  } catch (const IllegalMove& e) {
    EXPECT_EQ(e.move().from, (Position{5, 5}));
    EXPECT_EQ(e.move().to, (Position{4, 4}));
  }
}

TEST(IsTerminal, Examples) {
  EXPECT_TRUE(is_terminal({0, 0}));
  EXPECT_FALSE(is_terminal({0, 1}));
  EXPECT_FALSE(is_terminal({7, 4}));
}

TEST(RandomStart, UniformOnTwoByTwo) {
  const GameSpec spec{Rules::wythoff, 2};
  std::mt19937_64 rng(5);
  std::map<Position, int> counts;
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++counts[random_start(spec, rng)];
  ASSERT_EQ(counts.size(), 3u);
  double chi2 = 0.0;
  for (auto& [p, c] : counts) {
    EXPECT_FALSE(is_terminal(p));
    const double e = n / 3.0;
    chi2 += (c - e) * (c - e) / e;
  }
  EXPECT_LT(chi2, 13.82);  // 2 df, p = 0.001
}

TEST(RandomStart, DeterministicForSeed) {
  const GameSpec spec{Rules::wythoff, 15};
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(random_start(spec, a), random_start(spec, b));
}

TEST(RandomStart, NeverTerminal) {
  const GameSpec spec{Rules::wythoff, 15};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1'000'000; ++i) ASSERT_FALSE(is_terminal(random_start(spec, rng)));
}

TEST(GameSpec, Validation) {
  EXPECT_THROW((GameSpec{Rules::wythoff, 1}.validate()), InvalidInput);
  EXPECT_THROW((GameSpec{Rules::wythoff, 70000}.validate()), InvalidInput);
  EXPECT_NO_THROW((GameSpec{Rules::wythoff, 2}.validate()));
}

TEST(GameSpec, IndexRoundTrip) {
  const GameSpec spec{Rules::nim, 17};
  for (std::size_t i = 0; i < spec.cell_count(); ++i) EXPECT_EQ(spec.index(spec.at(i)), i);
  EXPECT_EQ(spec.index({3, 2}), 2u * 17u + 3u);
}

TEST(Rules, ParseRoundTrip) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) EXPECT_EQ(parse_rules(to_string(r)), r);
  EXPECT_THROW(parse_rules("chess"), InvalidInput);
}
