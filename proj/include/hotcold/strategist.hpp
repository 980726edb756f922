#pragma once

// The strategist: thresholds stumbler state values into hot/cold targets,
// fits a small network on normalized board coordinates, turns it into a
// bias field over any board, and earns influence by beating the frozen
// stumbler on a larger board.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hotcold/mlp.hpp"
#include "hotcold/oracle.hpp"
#include "hotcold/stumbler.hpp"

namespace hotcold {

enum class HeuristicMode { hot_and_cold, hot_only, cold_only, value_regression };

inline std::string_view to_string(HeuristicMode m) {
  switch (m) {
    case HeuristicMode::hot_and_cold: return "hot-and-cold";
    case HeuristicMode::hot_only: return "hot-only";
    case HeuristicMode::cold_only: return "cold-only";
    case HeuristicMode::value_regression: return "value-regression";
  }
  return "?";
}

inline HeuristicMode parse_heuristic_mode(std::string_view s) {
  if (s == "hot-and-cold") return HeuristicMode::hot_and_cold;
  if (s == "hot-only") return HeuristicMode::hot_only;
  if (s == "cold-only") return HeuristicMode::cold_only;
  if (s == "value-regression") return HeuristicMode::value_regression;
  throw InvalidInput("unknown heuristic mode '" + std::string(s) + "'");
}

// Targets are desirability of moving TO the coordinate: cold-like +1,
// hot-like -1 (or -V(s) in value-regression mode).
struct HotColdDataset {
  struct Sample {
    Position coord;
    double target = 0.0;
  };
  std::vector<Sample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

// V(s) = max_a Q(s,a) over stored actions. The terminal corner never has
// entries; for a non-empty table it is included with V = -1, the value of
// having lost, so the corner is always a cold-like target.
inline HotColdDataset extract_dataset(const QTable& q, double v_hot, double v_cold,
                                      HeuristicMode mode) {
  if (!(v_cold < 0.0 && 0.0 < v_hot))
    throw InvalidInput("extract_dataset: thresholds must satisfy v_cold < 0 < v_hot");
  HotColdDataset data;
  if (q.empty()) return data;
  auto values = q.state_values();
  values.emplace(Position{0, 0}, -1.0);
  for (const auto& [s, v] : values) {
    if (mode == HeuristicMode::value_regression) {
      data.samples.push_back({s, -v});
      continue;
    }
    const bool hot = v > v_hot;
    const bool cold = v < v_cold;
    if (hot && mode != HeuristicMode::cold_only) data.samples.push_back({s, -1.0});
    if (cold && mode != HeuristicMode::hot_only) data.samples.push_back({s, +1.0});
  }
  return data;
}

struct StrategistConfig {
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 16;  // 0 drops the second hidden layer
  int board = 50;            // M: board the strategist imagines play on
  double coord_scale = 1.0;  // inputs are (x, y) / coord_scale
  HeuristicMode mode = HeuristicMode::hot_and_cold;
  double v_hot = 0.5;
  double v_cold = -0.5;
  double influence0 = 0.0;
};

struct StrategistState {
  Mlp net;
  double influence = 0.0;
  int board = 50;
  double coord_scale = 1.0;
  HeuristicMode mode = HeuristicMode::hot_and_cold;
  double v_hot = 0.5;
  double v_cold = -0.5;

  friend bool operator==(const StrategistState&, const StrategistState&) = default;
};

inline StrategistState make_strategist(const StrategistConfig& cfg, std::uint64_t seed) {
  if (cfg.board < 1) throw InvalidInput("strategist board must be positive");
  if (cfg.hidden1 == 0) throw InvalidInput("strategist hidden1 must be positive");
  if (!(cfg.coord_scale > 0.0)) throw InvalidInput("strategist coord_scale must be positive");
  std::vector<std::size_t> dims{2, cfg.hidden1};
  if (cfg.hidden2 > 0) dims.push_back(cfg.hidden2);
  dims.push_back(1);
  return StrategistState{Mlp(dims, OutputActivation::tanh, seed),
                         std::clamp(cfg.influence0, -1.0, 1.0),
                         cfg.board,
                         cfg.coord_scale,
                         cfg.mode,
                         cfg.v_hot,
                         cfg.v_cold};
}

inline std::vector<double> encode_coord(Position p, double scale) {
  return {static_cast<double>(p.x) / scale, static_cast<double>(p.y) / scale};
}

// n_r steps, each on ceil(|data|/2) samples drawn with replacement. Returns
// the pre-step loss of the last step, or nullopt when there was no data.
template <typename Rng>
std::optional<double> train_strategist(StrategistState& state, const HotColdDataset& data,
                                       double alpha_r, int n_r, Rng& rng) {
  if (data.empty() || n_r <= 0) return std::nullopt;
  std::vector<std::vector<double>> inputs;
  inputs.reserve(data.size());
  for (const auto& s : data.samples) inputs.push_back(encode_coord(s.coord, state.coord_scale));

  const std::size_t batch_size = (data.size() + 1) / 2;
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  Batch batch;
  batch.inputs.resize(batch_size);
  batch.targets.resize(batch_size);
  double last = 0.0;
  for (int step = 0; step < n_r; ++step) {
    for (std::size_t i = 0; i < batch_size; ++i) {
      const std::size_t k = pick(rng);
      batch.inputs[i] = inputs[k];
      batch.targets[i].assign(1, data.samples[k].target);
    }
    last = sgd_step(state.net, batch, alpha_r);
  }
  return last;
}

// B(p) = net(x/scale, y/scale) on every cell of spec's board, carrying I.
inline BiasField bias_field(const StrategistState& state, const GameSpec& spec) {
  std::vector<double> values(spec.cell_count());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = state.net.forward1(encode_coord(spec.at(i), state.coord_scale));
  return BiasField(spec.board_size, std::move(values), state.influence);
}

// Hard-coded perfect strategist: +1 on cold cells, -1 on hot.
inline BiasField oracle_bias(const HotColdTable& table, double influence) {
  const GameSpec& spec = table.spec();
  std::vector<double> values(spec.cell_count());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = table.is_cold(spec.at(i)) ? 1.0 : -1.0;
  return BiasField(spec.board_size, std::move(values), influence);
}

inline BiasField oracle_bias(const GameSpec& spec, double influence = 1.0) {
  return oracle_bias(solve_retrograde(spec), influence);
}

// Greedy move by the strategist's field alone; ties broken at random.
template <typename Rng>
Position strategist_move(const BiasField& field, std::span<const Position> legal, Rng& rng) {
  return argmax_random_tie(legal, [&](Position a) { return field.value(a); }, rng);
}

// Greedy move from the frozen Q-table; unseen entries read as 0.
template <typename Rng>
Position stumbler_greedy_move(const QTable& q, Position s, std::span<const Position> legal,
                              Rng& rng) {
  return argmax_random_tie(legal, [&](Position a) { return q.get(s, a); }, rng);
}

struct InfluenceGame {
  Position start;
  bool strategist_won = false;
  int moves = 0;
};

// One greedy game on the larger board: stumbler first, strategist second,
// whoever lands on (0,0) wins. The Q-table is not touched.
template <typename Rng>
InfluenceGame play_influence_game(const QTable& q, const BiasField& field,
                                  const GameSpec& large_spec, Rng& rng) {
  InfluenceGame game;
  game.start = random_start(large_spec, rng);
  Position s = game.start;
  bool strategist_turn = false;
  std::vector<Position> legal;
  while (true) {
    legal = legal_moves(large_spec, s);
    s = strategist_turn ? strategist_move(field, legal, rng) : stumbler_greedy_move(q, s, legal, rng);
    ++game.moves;
    if (is_terminal(s)) {
      game.strategist_won = strategist_turn;
      return game;
    }
    strategist_turn = !strategist_turn;
  }
}

// I += alpha_I on a strategist win, -= on a loss, then clip to [floor, 1].
// Training passes floor 0: a negative I inverts a half-learned map and pushes
// the stumbler onto hot targets.
inline double influence_step(double influence, bool strategist_won, double alpha_i, double floor = -1.0) {
  if (!(floor >= -1.0 && floor <= 0.0)) throw InvalidInput("influence floor must be in [-1, 0]");
  influence += strategist_won ? alpha_i : -alpha_i;
  return std::clamp(influence, floor, 1.0);
}

template <typename Rng>
double update_influence(const QTable& q, const BiasField& field, double influence,
                        const GameSpec& large_spec, int stumbler_board, double alpha_i, Rng& rng,
                        double floor = -1.0) {
  if (large_spec.board_size <= stumbler_board)
    throw InvalidInput("update_influence: the influence board must be larger than the stumbler board");
  const InfluenceGame game = play_influence_game(q, field, large_spec, rng);
  return influence_step(influence, game.strategist_won, alpha_i, floor);
}

template <typename Rng>
double update_influence(const QTable& q, StrategistState& state, const GameSpec& large_spec,
                        int stumbler_board, double alpha_i, Rng& rng, double floor = -1.0) {
  state.influence = update_influence(q, bias_field(state, large_spec), state.influence, large_spec,
                                     stumbler_board, alpha_i, rng, floor);
  return state.influence;
}

}  // namespace hotcold
