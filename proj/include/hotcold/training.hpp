#pragma once

// The nested stumbler-strategist training loop, also used (with the
// strategist disabled or replaced by the oracle) for every baseline run.

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hotcold/oracle.hpp"
#include "hotcold/strategist.hpp"
#include "hotcold/stumbler.hpp"

namespace hotcold {

enum class StrategistKind { none, learned, oracle };

inline std::string_view to_string(StrategistKind k) {
  switch (k) {
    case StrategistKind::none: return "none";
    case StrategistKind::learned: return "learned";
    case StrategistKind::oracle: return "oracle";
  }
  return "?";
}

struct TrainingConfig {
  Rules rules = Rules::wythoff;
  int stumbler_board = 15;
  int influence_board = 50;  // board of the influence game
  StumblerConfig stumbler;   // stumbler.board_size is overwritten by stumbler_board
  StrategistConfig strategist;
  StrategistKind strategist_kind = StrategistKind::learned;
  double alpha_r = 0.025;
  double alpha_i = 0.2;
  double influence_floor = 0.0;  // lower clip of I
  int n_s = 500;
  int n_r = 500;
  long long episodes = 75'000;
  OpponentKind opponent = OpponentKind::self_play;
  bool opponent_biased = true;
};

struct MetricsRecord {
  std::uint64_t seed = 0;
  int outer_iteration = 0;
  long long episodes_consumed = 0;
  double optimal_fraction = 0.0;
  double influence = 0.0;
  double strategist_loss = 0.0;
  long long wins_player = 0;
  long long wins_opponent = 0;
  double wall_seconds = 0.0;
};

struct TrainingResult {
  std::vector<MetricsRecord> records;
  QTable q;
  QTable opponent_q;  // only used with an independent opponent
  std::optional<StrategistState> strategist;
  // Per episode: player moves made from hot states, and how many went cold.
  std::vector<std::pair<int, int>> episode_moves;

  // Mean per-move optimal fraction over the last `window` episodes.
  double final_optimal_fraction(std::size_t window = 100) const {
    const std::size_t from = episode_moves.size() > window ? episode_moves.size() - window : 0;
    long long hot = 0;
    long long good = 0;
    for (std::size_t i = from; i < episode_moves.size(); ++i) {
      hot += episode_moves[i].first;
      good += episode_moves[i].second;
    }
    return hot == 0 ? 0.0 : static_cast<double>(good) / static_cast<double>(hot);
  }
};

inline void validate(const TrainingConfig& cfg) {
  GameSpec{cfg.rules, cfg.stumbler_board}.validate();
  StumblerConfig s = cfg.stumbler;
  s.board_size = cfg.stumbler_board;
  s.validate();
  if (cfg.n_s < 1) throw ConfigError("n_s must be >= 1");
  if (cfg.n_r < 0) throw ConfigError("n_r must be >= 0");
  if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (cfg.strategist_kind != StrategistKind::none) {
    if (cfg.influence_board <= cfg.stumbler_board)
      throw ConfigError("influence_board must be larger than stumbler_board");
    if (!(cfg.alpha_r > 0.0)) throw ConfigError("alpha_r must be > 0");
    if (!(cfg.alpha_i >= 0.0 && cfg.alpha_i <= 1.0)) throw ConfigError("alpha_i must be in [0, 1]");
    if (!(cfg.influence_floor >= -1.0 && cfg.influence_floor <= 0.0))
      throw ConfigError("influence_floor must be in [-1, 0]");
    if (!(cfg.strategist.v_cold < 0.0 && cfg.strategist.v_hot > 0.0))
      throw ConfigError("thresholds must satisfy v_cold < 0 < v_hot");
  }
}

// Greedy move of the (possibly biased) stumbler: argmax of Q(s,a) + I*B(a).
template <typename Rng>
Position biased_greedy_move(const QTable& q, const BiasField& field, Position s,
                            std::span<const Position> legal, Rng& rng) {
  return argmax_random_tie(legal, [&](Position a) { return q.get(s, a) + field.bias(a); }, rng);
}

// Optimal fraction of the greedy biased policy over every hot state the
// stumbler has visited (has at least one table entry for).
template <typename Rng>
double greedy_optimal_fraction(const QTable& q, const BiasField& field, const HotColdTable& table,
                               Rng& rng) {
  std::vector<Position> states;
  for (const auto& [s, v] : q.state_values())
    if (!table.is_cold(s)) states.push_back(s);
  std::vector<Position> legal;
  const auto choose = [&](Position s) {
    legal = legal_moves(table.spec(), s);
    return biased_greedy_move(q, field, s, legal, rng);
  };
  return score_policy(table, choose, states).optimal_fraction;
}

// Runs one seed. `initial` replaces the freshly initialised strategist (rule
// transfer starts from a pretrained one). Optimal fractions are scored
// against `table`, which must match rules and stumbler_board.
inline TrainingResult run_stumbler_strategist(const TrainingConfig& cfg, std::uint64_t seed,
                                              const HotColdTable& table,
                                              std::optional<StrategistState> initial = std::nullopt) {
  validate(cfg);
  const GameSpec spec{cfg.rules, cfg.stumbler_board};
  const GameSpec large{cfg.rules, cfg.influence_board};
  if (!(table.spec() == spec)) throw InvalidInput("oracle table does not match the training board");

  StumblerConfig scfg = cfg.stumbler;
  scfg.board_size = cfg.stumbler_board;

  std::mt19937_64 rng(seed);
  // Scoring draws tie-breaks from its own stream so it cannot perturb training.
  std::mt19937_64 eval_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  TrainingResult result;
  Opponent opponent{cfg.opponent, &result.opponent_q, cfg.opponent_biased};

  std::optional<HotColdTable> large_table;
  BiasField field;          // acting on the stumbler board
  BiasField large_field;    // used in the influence game
  double influence = cfg.strategist.influence0;
  if (cfg.strategist_kind == StrategistKind::learned) {
    result.strategist = initial ? *initial : make_strategist(cfg.strategist, seed ^ 0x5eedULL);
    influence = result.strategist->influence;
    field = bias_field(*result.strategist, spec);
  } else if (cfg.strategist_kind == StrategistKind::oracle) {
    large_table = solve_retrograde(large);
    large_field = oracle_bias(*large_table, influence);
    field = oracle_bias(table, influence);
  }

  const auto t0 = std::chrono::steady_clock::now();
  long long done = 0;
  int iteration = 0;
  while (done < cfg.episodes) {
    const long long batch = std::min<long long>(cfg.n_s, cfg.episodes - done);
    MetricsRecord rec;
    rec.seed = seed;
    rec.outer_iteration = iteration;
    for (long long e = 0; e < batch; ++e) {
      ++done;
      const EpisodeRecord ep =
          play_episode(result.q, spec, scfg, field, done, opponent, rng, /*learning=*/true);
      int hot = 0;
      int good = 0;
      for (const auto& m : ep.moves) {
        if (m.mover != Side::player || table.is_cold(m.move.from)) continue;
        ++hot;
        if (table.is_cold(m.move.to)) ++good;
      }
      result.episode_moves.emplace_back(hot, good);
      (ep.winner == Side::player ? rec.wins_player : rec.wins_opponent) += 1;
    }
    rec.episodes_consumed = done;
    rec.optimal_fraction = greedy_optimal_fraction(result.q, field, table, eval_rng);

    if (cfg.strategist_kind == StrategistKind::learned) {
      StrategistState& st = *result.strategist;
      const HotColdDataset data = extract_dataset(result.q, st.v_hot, st.v_cold, st.mode);
      if (auto loss = train_strategist(st, data, cfg.alpha_r, cfg.n_r, rng)) {
        rec.strategist_loss = *loss;
        update_influence(result.q, st, large, cfg.stumbler_board, cfg.alpha_i, rng, cfg.influence_floor);
        field = bias_field(st, spec);
      }
      influence = st.influence;
    } else if (cfg.strategist_kind == StrategistKind::oracle) {
      influence = update_influence(result.q, large_field, influence, large, cfg.stumbler_board,
                                   cfg.alpha_i, rng, cfg.influence_floor);
      field.set_influence(influence);
      large_field.set_influence(influence);
    }
    rec.influence = influence;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.records.push_back(rec);
    ++iteration;
  }
  return result;
}

}  // namespace hotcold
