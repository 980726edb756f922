#pragma once

// Tabular Q-learning "stumbler" with joint-action updates and an additive
// top-down bias I * B(target) on action selection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "hotcold/game.hpp"

namespace hotcold {

class QTable {
 public:
  struct Entry {
    Position state;
    Position action;
    double q = 0.0;
  };

  // Unseen pairs read as 0.
  double get(Position s, Position a) const {
    auto it = values_.find(key(s, a));
    return it == values_.end() ? 0.0 : it->second;
  }

  void set(Position s, Position a, double q) { values_[key(s, a)] = q; }

  bool contains(Position s, Position a) const { return values_.contains(key(s, a)); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  // Max over `actions` with unseen entries read as 0; 0 for an empty list.
  double max_over(Position s, std::span<const Position> actions) const {
    if (actions.empty()) return 0.0;
    double best = get(s, actions.front());
    for (std::size_t i = 1; i < actions.size(); ++i) best = std::max(best, get(s, actions[i]));
    return best;
  }

  // V(s) = max over stored actions, for every state with at least one entry.
  std::map<Position, double> state_values() const {
    std::map<Position, double> v;
    for (const auto& [k, q] : values_) {
      const Position s = state_of(k);
      auto [it, inserted] = v.try_emplace(s, q);
      if (!inserted) it->second = std::max(it->second, q);
    }
    return v;
  }

  // Sorted by (state, action).
  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(values_.size());
    for (const auto& [k, q] : values_) out.push_back({state_of(k), action_of(k), q});
    std::sort(out.begin(), out.end(), [](const Entry& l, const Entry& r) {
      if (l.state != r.state) return l.state < r.state;
      return l.action < r.action;
    });
    return out;
  }

  friend bool operator==(const QTable& l, const QTable& r) { return l.values_ == r.values_; }

 private:
  static std::uint64_t key(Position s, Position a) {
    auto u = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint16_t>(v)); };
    return (u(s.x) << 48) | (u(s.y) << 32) | (u(a.x) << 16) | u(a.y);
  }
  static Position state_of(std::uint64_t k) {
    return {static_cast<int>((k >> 48) & 0xffff), static_cast<int>((k >> 32) & 0xffff)};
  }
  static Position action_of(std::uint64_t k) {
    return {static_cast<int>((k >> 16) & 0xffff), static_cast<int>(k & 0xffff)};
  }

  std::unordered_map<std::uint64_t, double> values_;
};

struct StumblerConfig {
  double alpha_s = 0.4;
  double epsilon0 = 0.4;
  double gamma = 1.0;
  int board_size = 15;

  void validate() const {
    if (!(alpha_s > 0.0 && alpha_s <= 1.0)) throw InvalidInput("alpha_s must be in (0, 1]");
    if (!(epsilon0 > 0.0 && epsilon0 <= 1.0)) throw InvalidInput("epsilon0 must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidInput("gamma must be in [0, 1]");
    if (board_size < 2) throw InvalidInput("board_size must be >= 2");
  }
};

// Strategist desirability B(p) of landing on p, sampled on a square grid,
// together with the influence I that scales it. Positions outside the grid
// read as 0. A default-constructed field contributes nothing.
class BiasField {
 public:
  BiasField() = default;
  BiasField(int size, std::vector<double> values, double influence)
      : size_(size), values_(std::move(values)), influence_(influence) {
    if (values_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size))
      throw InvalidInput("BiasField: value grid does not match size");
  }

  double value(Position p) const {
    if (p.x < 0 || p.y < 0 || p.x >= size_ || p.y >= size_) return 0.0;
    return values_[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(size_) +
                   static_cast<std::size_t>(p.x)];
  }

  double bias(Position target) const { return influence_ == 0.0 ? 0.0 : influence_ * value(target); }

  int size() const { return size_; }
  double influence() const { return influence_; }
  void set_influence(double i) { influence_ = i; }
  std::span<const double> values() const { return values_; }

 private:
  int size_ = 0;
  std::vector<double> values_;
  double influence_ = 0.0;
};

// epsilon0 / (ln n + e).
inline double anneal_epsilon(double epsilon0, long long n) {
  if (n < 1) throw InvalidInput("anneal_epsilon: episode index must be >= 1");
  return epsilon0 / (std::log(static_cast<double>(n)) + std::numbers::e);
}

// Greedy over score(a); exact ties broken uniformly at random.
template <typename Score, typename Rng>
Position argmax_random_tie(std::span<const Position> options, Score&& score, Rng& rng) {
  double best = score(options.front());
  std::size_t n_best = 1;
  Position chosen = options.front();
  // Reservoir sampling over the tied set keeps one pass and no allocation.
  for (std::size_t i = 1; i < options.size(); ++i) {
    const double v = score(options[i]);
    if (v > best) {
      best = v;
      n_best = 1;
      chosen = options[i];
    } else if (v == best) {
      ++n_best;
      if (std::uniform_int_distribution<std::size_t>(0, n_best - 1)(rng) == 0) chosen = options[i];
    }
  }
  return chosen;
}

template <typename Rng>
Position select_action(const QTable& q, Position s, std::span<const Position> legal, double eps,
                       const BiasField& bias, Rng& rng) {
  if (legal.empty()) throw TerminalState("select_action called on terminal state " + to_string(s));
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < eps) {
    return legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
  }
  return argmax_random_tie(legal, [&](Position a) { return q.get(s, a) + bias.bias(a); }, rng);
}

// Q(s,a) += alpha * (reward + gamma * Q' - Q(s,a)); Q' = 0 when the episode
// ended, else max_a' Q(s_next, a') with s_next the state after the reply.
inline void q_update(QTable& q, const GameSpec& spec, Position s, Position a, int reward,
                     std::optional<Position> s_next, double alpha, double gamma) {
  double q_next = 0.0;
  if (s_next && !is_terminal(*s_next)) {
    std::vector<Position> next_legal;
    for_each_move(spec.rules, *s_next, [&](Position t) {
      next_legal.push_back(t);
      return true;
    });
    q_next = q.max_over(*s_next, next_legal);
  }
  const double old = q.get(s, a);
  q.set(s, a, old + alpha * (static_cast<double>(reward) + gamma * q_next - old));
}

enum class OpponentKind {
  self_play,    // shares the player's table and policy
  independent,  // its own table, plain epsilon-greedy Q-learning, no bias
  random,       // uniform over legal moves, never learns
};

struct Opponent {
  OpponentKind kind = OpponentKind::self_play;
  QTable* table = nullptr;  // required for independent
  bool use_bias = true;     // self_play only: apply the player's bias field too
};

enum class Side : std::uint8_t { player, opponent };

struct EpisodeMove {
  Side mover;
  Move move;
};

struct EpisodeRecord {
  Position start;
  std::vector<EpisodeMove> moves;
  Side winner = Side::player;
};

// One episode: random (or given) start, player moves first, alternate until
// someone lands on (0,0). With learning on, every (s,a) is updated once the
// state after the other side's reply is known: +1 for the winning move, -1
// for the move the opponent answered with a win, 0 otherwise.
template <typename Rng>
EpisodeRecord play_episode(QTable& q, const GameSpec& spec, const StumblerConfig& cfg,
                           const BiasField& bias, long long n, const Opponent& opponent, Rng& rng,
                           bool learning, std::optional<Position> start = std::nullopt) {
  if (opponent.kind == OpponentKind::independent && opponent.table == nullptr)
    throw InvalidInput("independent opponent requires its own QTable");

  EpisodeRecord rec;
  rec.start = start ? *start : random_start(spec, rng);
  check_on_board(spec, rec.start);
  if (is_terminal(rec.start)) throw InvalidInput("episode cannot start on the terminal position");

  const double eps = anneal_epsilon(cfg.epsilon0, n);
  const BiasField no_bias;

  struct Pending {
    Position s;
    Position a;
  };
  std::optional<Pending> pending[2];
  auto table_for = [&](Side side) -> QTable* {
    if (side == Side::player || opponent.kind == OpponentKind::self_play) return &q;
    if (opponent.kind == OpponentKind::independent) return opponent.table;
    return nullptr;
  };

  std::vector<Position> legal;
  Position s = rec.start;
  Side mover = Side::player;
  while (true) {
    legal.clear();
    for_each_move(spec.rules, s, [&](Position t) {
      legal.push_back(t);
      return true;
    });
    std::sort(legal.begin(), legal.end());

    QTable* table = table_for(mover);
    Position a;
    if (table == nullptr) {
      a = legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
    } else {
      const bool biased = mover == Side::player ||
                          (opponent.kind == OpponentKind::self_play && opponent.use_bias);
      a = select_action(*table, s, legal, eps, biased ? bias : no_bias, rng);
    }
    rec.moves.push_back({mover, Move{s, a}});

    const auto me = static_cast<std::size_t>(mover);
    const auto other = 1 - me;
    const Side other_side = mover == Side::player ? Side::opponent : Side::player;
    if (is_terminal(a)) {
      rec.winner = mover;
      if (learning) {
        if (table) q_update(*table, spec, s, a, 1, std::nullopt, cfg.alpha_s, cfg.gamma);
        if (pending[other]) {
          if (QTable* t = table_for(other_side))
            q_update(*t, spec, pending[other]->s, pending[other]->a, -1, std::nullopt, cfg.alpha_s,
                     cfg.gamma);
        }
      }
      return rec;
    }
    if (learning && pending[other]) {
      if (QTable* t = table_for(other_side))
        q_update(*t, spec, pending[other]->s, pending[other]->a, 0, a, cfg.alpha_s, cfg.gamma);
    }
    pending[me] = Pending{s, a};
    s = a;
    mover = other_side;
  }
}

}  // namespace hotcold
