#include <gtest/gtest.h>

#include <random>

#include "hotcold/strategist.hpp"

using namespace hotcold;

namespace {

QTable table_with_values(std::initializer_list<std::pair<Position, double>> values) {
  QTable q;
  for (auto [s, v] : values) q.set(s, {0, 0}, v);
  return q;
}

double label_of(const HotColdDataset& d, Position p) {
  for (const auto& s : d.samples)
    if (s.coord == p) return s.target;
  return 0.0;
}

bool contains(const HotColdDataset& d, Position p) {
  for (const auto& s : d.samples)
    if (s.coord == p) return true;
  return false;
}

}  // namespace

TEST(ExtractDataset, ThresholdExamples) {
  const QTable q = table_with_values({{{3, 3}, 0.7}, {{4, 4}, 0.0}, {{1, 2}, -0.6}});
  const auto d = extract_dataset(q, 0.5, -0.5, HeuristicMode::hot_and_cold);
  EXPECT_EQ(label_of(d, {3, 3}), -1.0);
  EXPECT_FALSE(contains(d, {4, 4}));
  EXPECT_EQ(label_of(d, {1, 2}), 1.0);
  EXPECT_EQ(label_of(d, {0, 0}), 1.0);  // the terminal corner is always a cold-like target
}

TEST(ExtractDataset, StateValueIsMaxOverActions) {
  QTable q;
  q.set({5, 5}, {0, 0}, 0.9);
  q.set({5, 5}, {1, 1}, -0.9);
  const auto d = extract_dataset(q, 0.5, -0.5, HeuristicMode::hot_and_cold);
  EXPECT_EQ(label_of(d, {5, 5}), -1.0);
}

TEST(ExtractDataset, Modes) {
  const QTable q = table_with_values({{{3, 3}, 0.7}, {{1, 2}, -0.6}});
  const auto hot = extract_dataset(q, 0.5, -0.5, HeuristicMode::hot_only);
  EXPECT_TRUE(contains(hot, {3, 3}));
  EXPECT_FALSE(contains(hot, {1, 2}));
  const auto cold = extract_dataset(q, 0.5, -0.5, HeuristicMode::cold_only);
  EXPECT_FALSE(contains(cold, {3, 3}));
  EXPECT_TRUE(contains(cold, {1, 2}));
  const auto reg = extract_dataset(q, 0.5, -0.5, HeuristicMode::value_regression);
  EXPECT_DOUBLE_EQ(label_of(reg, {3, 3}), -0.7);
  EXPECT_DOUBLE_EQ(label_of(reg, {1, 2}), 0.6);
}

TEST(ExtractDataset, EmptyTableGivesEmptyDataset) {
  EXPECT_TRUE(extract_dataset(QTable{}, 0.5, -0.5, HeuristicMode::hot_and_cold).empty());
}

TEST(ExtractDataset, BadThresholdsRejected) {
  EXPECT_THROW(extract_dataset(QTable{}, -0.1, -0.5, HeuristicMode::hot_and_cold), InvalidInput);
}

TEST(TrainStrategist, LearnsOracleLabels) {
  const auto table = solve_retrograde({Rules::wythoff, 15});
  HotColdDataset data;
  for (std::size_t i = 0; i < table.spec().cell_count(); ++i) {
    const Position p = table.spec().at(i);
    data.samples.push_back({p, table.is_cold(p) ? 1.0 : -1.0});
  }
  StrategistState st = make_strategist(StrategistConfig{}, 1);
  std::mt19937_64 rng(1);
  ASSERT_TRUE(train_strategist(st, data, 0.025, 5000, rng).has_value());
  int agree = 0;
  for (const auto& s : data.samples) {
    const double out = st.net.forward1(encode_coord(s.coord, st.coord_scale));
    agree += (out > 0) == (s.target > 0);
  }
  EXPECT_GE(static_cast<double>(agree) / data.size(), 0.95);
}

TEST(TrainStrategist, EmptyDatasetLeavesState) {
  StrategistState st = make_strategist(StrategistConfig{}, 1);
  const StrategistState before = st;
  std::mt19937_64 rng(1);
  EXPECT_FALSE(train_strategist(st, HotColdDataset{}, 0.025, 100, rng).has_value());
  EXPECT_TRUE(st == before);
}

TEST(MakeStrategist, ShapeFollowsConfig) {
  StrategistConfig cfg;
  cfg.hidden1 = 20;
  cfg.hidden2 = 0;
  const auto st = make_strategist(cfg, 2);
  EXPECT_EQ(st.net.dims(), (std::vector<std::size_t>{2, 20, 1}));
  EXPECT_EQ(st.net.output_activation(), OutputActivation::tanh);
  cfg.hidden2 = 7;
  EXPECT_EQ(make_strategist(cfg, 2).net.dims(), (std::vector<std::size_t>{2, 20, 7, 1}));
}

TEST(BiasField, ZeroNetGivesZeroBias) {
  StrategistState st = make_strategist(StrategistConfig{}, 3);
  for (std::size_t i = 0; i < st.net.parameter_count(); ++i) st.net.parameter(i) = 0.0;
  st.influence = 1.0;
  const auto f = bias_field(st, {Rules::wythoff, 20});
  for (double v : f.values()) EXPECT_EQ(v, 0.0);
}

TEST(BiasField, CarriesInfluenceAndSize) {
  StrategistState st = make_strategist(StrategistConfig{}, 3);
  st.influence = 0.3;
  const auto f = bias_field(st, {Rules::wythoff, 33});
  EXPECT_EQ(f.size(), 33);
  EXPECT_EQ(f.influence(), 0.3);
  EXPECT_DOUBLE_EQ(f.value({4, 9}), st.net.forward1(encode_coord({4, 9}, st.coord_scale)));
}

TEST(OracleBias, Examples) {
  const auto f = oracle_bias(GameSpec{Rules::wythoff, 15});
  EXPECT_EQ(f.value({1, 2}), 1.0);
  EXPECT_EQ(f.value({3, 3}), -1.0);
  EXPECT_EQ(f.value({0, 0}), 1.0);
}

TEST(StrategistMove, OracleFieldAlwaysFindsCold) {
  const GameSpec spec{Rules::wythoff, 30};
  const auto table = solve_retrograde(spec);
  const auto f = oracle_bias(table, 1.0);
  std::mt19937_64 rng(1);
  for (Position s : table.positions(Label::hot)) {
    const auto legal = legal_moves(spec, s);
    EXPECT_TRUE(table.is_cold(strategist_move(f, legal, rng)));
  }
}

TEST(Influence, StepExamples) {
  EXPECT_NEAR(influence_step(0.0, true, 0.2), 0.2, 1e-15);
  EXPECT_EQ(influence_step(0.9, true, 0.2), 1.0);
  EXPECT_NEAR(influence_step(0.0, false, 0.2), -0.2, 1e-15);
  EXPECT_EQ(influence_step(-0.9, false, 0.2), -1.0);
  EXPECT_EQ(influence_step(0.1, false, 0.2, 0.0), 0.0);
  EXPECT_THROW(influence_step(0.0, true, 0.2, 0.5), InvalidInput);
}

TEST(Influence, OracleStrategistBeatsEmptyStumbler) {
  // With an empty table the stumbler moves at random; the perfect strategist
  // moving second should win most games.
  const GameSpec large{Rules::wythoff, 50};
  const auto f = oracle_bias(large, 1.0);
  std::mt19937_64 rng(5);
  int wins = 0;
  for (int i = 0; i < 400; ++i) wins += play_influence_game(QTable{}, f, large, rng).strategist_won;
  EXPECT_GT(wins, 320);
}

TEST(Influence, GameLeavesTableAlone) {
  QTable q;
  q.set({3, 3}, {0, 0}, 0.5);
  const QTable before = q;
  std::mt19937_64 rng(1);
  const auto f = oracle_bias(GameSpec{Rules::wythoff, 40}, 1.0);
  for (int i = 0; i < 50; ++i) update_influence(q, f, 0.0, {Rules::wythoff, 40}, 15, 0.2, rng);
  EXPECT_TRUE(q == before);
}

TEST(Influence, LargeBoardMustBeLarger) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(update_influence(QTable{}, BiasField{}, 0.0, {Rules::wythoff, 15}, 15, 0.2, rng), InvalidInput);
}

TEST(HeuristicMode, ParseRoundTrip) {
  for (auto m : {HeuristicMode::hot_and_cold, HeuristicMode::hot_only, HeuristicMode::cold_only,
                 HeuristicMode::value_regression})
    EXPECT_EQ(parse_heuristic_mode(to_string(m)), m);
  EXPECT_THROW(parse_heuristic_mode("lukewarm"), std::invalid_argument);
}
