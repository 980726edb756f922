#include <gtest/gtest.h>

#include "hotcold/matchup.hpp"

using namespace hotcold;

namespace {

Agent cheater() {
  return {"cheater", [](const GameSpec&, Position s, const std::vector<Position>&, Rng&) {
            return Position{s.x, s.y};  // "moves" to where it already is
          }};
}

}  // namespace

TEST(Matchup, RandomVsRandomIsBalanced) {
  Rng rng(1);
  const auto r = evaluate_matchup(random_agent(), random_agent(), {Rules::wythoff, 15}, 4000, rng);
  EXPECT_EQ(r.games, 4000);
  EXPECT_EQ(r.outcomes.size(), 4000u);
  EXPECT_NEAR(r.a_win_fraction(), 0.5, 0.04);
  EXPECT_EQ(r.illegal_a + r.illegal_b, 0);
}

TEST(Matchup, FirstMoverAlternates) {
  Rng rng(2);
  const auto r = evaluate_matchup(random_agent(), random_agent(), {Rules::nim, 10}, 10, rng);
  for (std::size_t g = 0; g < r.outcomes.size(); ++g) EXPECT_EQ(r.outcomes[g].a_first, g % 2 == 0);
}

// From a hot start the oracle moving first always wins; from a cold start
// against another oracle the second mover wins.
TEST(Matchup, OracleWinsEveryHotStartItMovesFirstFrom) {
  for (Rules rules : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const GameSpec spec{rules, 25};
    const auto table = solve_retrograde(spec);
    Rng rng(3);
    const auto r = evaluate_matchup(oracle_agent(), random_agent(), spec, 2000, rng);
    for (const auto& o : r.outcomes)
      if (o.a_first && !table.is_cold(o.start)) EXPECT_TRUE(o.a_won) << to_string(o.start);
    const auto oo = evaluate_matchup(oracle_agent(), oracle_agent(), spec, 500, rng);
    for (const auto& o : oo.outcomes) EXPECT_EQ(o.a_won, o.a_first != table.is_cold(o.start));
  }
}

TEST(Matchup, SwappingAgentsMirrorsWins) {
  Rng r1(4), r2(4);
  const auto ab = evaluate_matchup(oracle_agent(), random_agent(), {Rules::wythoff, 20}, 600, r1);
  const auto ba = evaluate_matchup(random_agent(), oracle_agent(), {Rules::wythoff, 20}, 600, r2);
  // Same games up to who is called "a": win shares should nearly sum to one.
  EXPECT_NEAR(ab.a_win_fraction() + ba.a_win_fraction(), 1.0, 0.06);
  EXPECT_GT(ab.a_win_fraction(), 0.85);
}

TEST(Matchup, IllegalMoveForfeits) {
  Rng rng(5);
  const auto r = evaluate_matchup(cheater(), random_agent(), {Rules::wythoff, 10}, 20, rng);
  EXPECT_EQ(r.a_wins, 0);
  EXPECT_GT(r.illegal_a, 0);
  EXPECT_EQ(r.illegal_b, 0);
  for (const auto& o : r.outcomes) {
    EXPECT_FALSE(o.a_won);
    if (o.a_first) EXPECT_TRUE(o.forfeit);
  }
}

TEST(Matchup, DeterministicForSeed) {
  Rng r1(6), r2(6);
  const auto a = evaluate_matchup(oracle_agent(), random_agent(), {Rules::euclid, 30}, 300, r1);
  const auto b = evaluate_matchup(oracle_agent(), random_agent(), {Rules::euclid, 30}, 300, r2);
  EXPECT_EQ(a.a_wins, b.a_wins);
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) EXPECT_EQ(a.outcomes[i].start, b.outcomes[i].start);
}

TEST(Matchup, OracleAgentHandlesSeveralBoards) {
  const Agent o = oracle_agent();
  Rng rng(7);
  for (int n : {10, 40, 10, 25}) {
    const auto r = evaluate_matchup(o, random_agent(), {Rules::wythoff, n}, 100, rng);
    EXPECT_GT(r.a_win_fraction(), 0.8) << n;
  }
}

TEST(Matchup, StrategistAgentWithOracleLikeField) {
  // A strategist whose net already says "cold = +1" should play like the oracle.
  StrategistConfig cfg;
  StrategistState st = make_strategist(cfg, 1);
  const GameSpec spec{Rules::wythoff, 15};
  const auto table = solve_retrograde(spec);
  HotColdDataset data;
  for (std::size_t i = 0; i < spec.cell_count(); ++i)
    data.samples.push_back({spec.at(i), table.is_cold(spec.at(i)) ? 1.0 : -1.0});
  std::mt19937_64 trng(1);
  train_strategist(st, data, 0.025, 3000, trng);
  Rng rng(8);
  const auto r = evaluate_matchup(strategist_agent(st), random_agent(), spec, 400, rng);
  EXPECT_GT(r.a_win_fraction(), 0.8);
}

TEST(Matchup, StumblerAgentUsesTable) {
  QTable q;
  q.set({3, 3}, {0, 0}, 1.0);
  const Agent a = stumbler_agent(q);
  Rng rng(1);
  const GameSpec spec{Rules::wythoff, 10};
  EXPECT_EQ(a.choose(spec, {3, 3}, legal_moves(spec, {3, 3}), rng), (Position{0, 0}));
}

TEST(Matchup, RejectsBadInput) {
  Rng rng(1);
  EXPECT_THROW(evaluate_matchup(random_agent(), random_agent(), {Rules::wythoff, 1}, 10, rng), InvalidInput);
  EXPECT_THROW(evaluate_matchup(random_agent(), random_agent(), {Rules::wythoff, 10}, -1, rng), InvalidInput);
  const auto r = evaluate_matchup(random_agent(), random_agent(), {Rules::wythoff, 10}, 0, rng);
  EXPECT_EQ(r.a_win_fraction(), 0.0);
}
