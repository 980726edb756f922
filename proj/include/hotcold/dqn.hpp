#pragma once

// Deep Q-network baselines: "xy" nets score one (state, action) pair from
// scaled coordinates, "hot" nets map a one-hot state to one value per cell.
// Uniform replay, periodic target sync, self-play with the stumbler's reward
// scheme.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hotcold/matchup.hpp"
#include "hotcold/mlp.hpp"
#include "hotcold/oracle.hpp"
#include "hotcold/stumbler.hpp"

namespace hotcold {

enum class DqnFamily { xy, hot };

struct DqnArch {
  std::string name;
  DqnFamily family;
  std::vector<std::size_t> hidden;
};

inline const std::vector<DqnArch>& dqn_architectures() {
  static const std::vector<DqnArch> archs{
      {"xy1", DqnFamily::xy, {15}},
      {"xy2", DqnFamily::xy, {100}},
      {"xy3", DqnFamily::xy, {10, 20}},
      {"xy4", DqnFamily::xy, {100, 25, 25}},
      {"xy5", DqnFamily::xy, {1000, 2000}},
      {"optuna", DqnFamily::xy, {10, 11, 13}},
      {"hot1", DqnFamily::hot, {15}},
      {"hot2", DqnFamily::hot, {100}},
      {"hot3", DqnFamily::hot, {10, 20}},
      {"hot4", DqnFamily::hot, {100, 25, 25}},
      {"hot5", DqnFamily::hot, {1000, 2000}},
  };
  return archs;
}

inline const DqnArch& find_arch(std::string_view name) {
  for (const auto& a : dqn_architectures())
    if (a.name == name) return a;
  throw InvalidInput("unknown DQN architecture '" + std::string(name) + "'");
}

inline std::vector<double> encode_xy(Position s, Position a, int n) {
  const double d = static_cast<double>(n);
  return {s.x / d, s.y / d, a.x / d, a.y / d};
}

inline std::vector<double> encode_onehot(Position s, int n) {
  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(s.y) * static_cast<std::size_t>(n) + static_cast<std::size_t>(s.x)] = 1.0;
  return v;
}

struct DqnConfig {
  std::string arch = "optuna";
  double alpha = 0.01;
  double epsilon0 = 0.4;
  double gamma = 0.5;
  std::size_t replay_capacity = 10'000;
  std::size_t batch = 64;
  std::size_t target_sync = 500;
  bool anneal = true;          // false keeps epsilon at epsilon0
  long long eval_every = 500;  // episodes between logged evaluations

  void validate() const {
    find_arch(arch);
    if (!(alpha > 0.0)) throw ConfigError("dqn alpha must be > 0");
    if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0)) throw ConfigError("dqn epsilon0 must be in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("dqn gamma must be in [0, 1]");
    if (replay_capacity == 0) throw ConfigError("replay_capacity must be > 0");
    if (batch == 0) throw ConfigError("batch must be > 0");
    if (target_sync == 0) throw ConfigError("target_sync must be > 0");
    if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  }
};

struct Transition {
  Position s;
  Position a;
  int r = 0;
  Position s_next;
  bool terminal = false;
};

// Fixed-capacity ring; once full, each push overwrites the oldest entry.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidInput("ReplayBuffer capacity must be > 0");
    data_.reserve(std::min<std::size_t>(capacity, 1 << 16));
  }

  void push(const Transition& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[next_] = t;
    }
    next_ = (next_ + 1) % capacity_;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return data_.at(i); }

  template <typename R>
  std::size_t sample_index(R& rng) const {
    if (data_.empty()) throw InvalidInput("ReplayBuffer: sample from empty buffer");
    return std::uniform_int_distribution<std::size_t>(0, data_.size() - 1)(rng);
  }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

// A network plus the board it was built for. xy nets work on any board; hot
// nets only on `board`.
struct DqnAgent {
  DqnArch arch;
  int board = 15;
  Mlp net;

  bool supports(int n) const { return arch.family == DqnFamily::xy || n == board; }

  // Q for every legal action, in the order given.
  std::vector<double> action_values(const Mlp& m, const GameSpec& spec, Position s,
                                    std::span<const Position> legal) const {
    std::vector<double> out;
    out.reserve(legal.size());
    if (arch.family == DqnFamily::xy) {
      for (Position a : legal) out.push_back(m.forward1(encode_xy(s, a, spec.board_size)));
    } else {
      if (spec.board_size != board)
        throw InvalidInput("hot-family DQN built for N=" + std::to_string(board) +
                           " cannot play on N=" + std::to_string(spec.board_size));
      const auto q = m.forward(encode_onehot(s, board));
      for (Position a : legal) out.push_back(q[spec.index(a)]);
    }
    return out;
  }

  // Masked argmax: only legal actions compete; ties broken at random.
  template <typename R>
  Position greedy(const GameSpec& spec, Position s, std::span<const Position> legal, R& rng) const {
    const auto q = action_values(net, spec, s, legal);
    std::size_t best = 0;
    std::size_t ties = 1;
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (q[i] > q[best]) {
        best = i;
        ties = 1;
      } else if (q[i] == q[best]) {
        ++ties;
        if (std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng) == 0) best = i;
      }
    }
    return legal[best];
  }
};

inline std::vector<std::size_t> dqn_dims(const DqnArch& arch, int board) {
  std::vector<std::size_t> dims;
  const std::size_t cells = static_cast<std::size_t>(board) * static_cast<std::size_t>(board);
  dims.push_back(arch.family == DqnFamily::xy ? 4 : cells);
  dims.insert(dims.end(), arch.hidden.begin(), arch.hidden.end());
  dims.push_back(arch.family == DqnFamily::xy ? 1 : cells);
  return dims;
}

inline DqnAgent make_dqn(const DqnArch& arch, int board, std::uint64_t seed) {
  return DqnAgent{arch, board, Mlp(dqn_dims(arch, board), OutputActivation::identity, seed)};
}

inline Agent dqn_agent(DqnAgent agent) {
  auto a = std::make_shared<DqnAgent>(std::move(agent));
  return {a->arch.name, [a](const GameSpec& spec, Position s, const std::vector<Position>& legal,
                            Rng& rng) { return a->greedy(spec, s, legal, rng); }};
}

struct DqnRecord {
  long long episodes = 0;
  long long steps = 0;
  double epsilon = 0.0;
  double loss = 0.0;  // mean over the steps since the previous record
  double optimal_fraction = 0.0;
};

struct DqnResult {
  DqnAgent agent;
  std::vector<DqnRecord> records;
};

// Greedy policy over every Hot state of the board.
template <typename R>
PolicyScore dqn_policy_score(const DqnAgent& agent, const HotColdTable& table, R& rng) {
  const auto hot = table.positions(Label::hot);
  std::vector<Position> legal;
  return score_policy(
      table,
      [&](Position s) {
        legal = legal_moves(table.spec(), s);
        return agent.greedy(table.spec(), s, legal, rng);
      },
      hot);
}

namespace detail {

// One SGD step on a replay minibatch. Targets are r for terminal transitions,
// else r + gamma * max_a' Q_target(s', a'); only the taken action's output
// carries error.
template <typename R>
double dqn_learn(DqnAgent& agent, const Mlp& target, const GameSpec& spec, const ReplayBuffer& replay,
                 const DqnConfig& cfg, R& rng) {
  Batch batch;
  batch.inputs.reserve(cfg.batch);
  batch.targets.reserve(cfg.batch);
  std::vector<Position> legal;
  for (std::size_t i = 0; i < cfg.batch; ++i) {
    const Transition& t = replay[replay.sample_index(rng)];
    double y = static_cast<double>(t.r);
    if (!t.terminal) {
      legal = legal_moves(spec, t.s_next);
      const auto q = agent.action_values(target, spec, t.s_next, legal);
      y += cfg.gamma * *std::max_element(q.begin(), q.end());
    }
    if (agent.arch.family == DqnFamily::xy) {
      batch.inputs.push_back(encode_xy(t.s, t.a, spec.board_size));
      batch.targets.push_back({y});
    } else {
      auto x = encode_onehot(t.s, spec.board_size);
      auto out = agent.net.forward(x);
      out[spec.index(t.a)] = y;
      batch.inputs.push_back(std::move(x));
      batch.targets.push_back(std::move(out));
    }
  }
  return sgd_step(agent.net, batch, cfg.alpha);
}

}  // namespace detail

// Self-play on one shared network. Each side's (s, a) becomes a transition
// once the opponent has replied: +1 for a winning move, -1 if the reply won,
// otherwise 0 with s' the state after the reply. One learning step per stored
// transition once the buffer holds a full batch.
inline DqnResult dqn_train(const DqnConfig& cfg, const GameSpec& spec, long long episodes,
                           std::uint64_t seed) {
  cfg.validate();
  spec.validate();
  if (episodes < 0) throw InvalidInput("dqn_train: episodes must be >= 0");
  Rng rng(seed);
  Rng eval_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const HotColdTable table = solve_retrograde(spec);

  DqnResult result{make_dqn(find_arch(cfg.arch), spec.board_size, seed ^ 0xd9aULL), {}};
  DqnAgent& agent = result.agent;
  Mlp target = agent.net;
  ReplayBuffer replay(cfg.replay_capacity);
  long long steps = 0;
  double loss_sum = 0.0;
  long long loss_n = 0;

  auto store = [&](const Transition& t) {
    replay.push(t);
    if (replay.size() < cfg.batch) return;
    loss_sum += detail::dqn_learn(agent, target, spec, replay, cfg, rng);
    ++loss_n;
    if (++steps % static_cast<long long>(cfg.target_sync) == 0) target = agent.net;
  };

  struct Pending {
    Position s;
    Position a;
  };
  for (long long n = 1; n <= episodes; ++n) {
    const double eps = cfg.anneal ? anneal_epsilon(cfg.epsilon0, n) : cfg.epsilon0;
    std::optional<Pending> pending[2];
    Position s = random_start(spec, rng);
    int me = 0;
    while (true) {
      const auto legal = legal_moves(spec, s);
      Position a;
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < eps)
        a = legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
      else
        a = agent.greedy(spec, s, legal, rng);
      const int other = 1 - me;
      if (is_terminal(a)) {
        store({s, a, 1, a, true});
        if (pending[other]) store({pending[other]->s, pending[other]->a, -1, a, true});
        break;
      }
      if (pending[other]) store({pending[other]->s, pending[other]->a, 0, a, false});
      pending[me] = Pending{s, a};
      s = a;
      me = other;
    }
    if (n % cfg.eval_every == 0 || n == episodes) {
      DqnRecord rec;
      rec.episodes = n;
      rec.steps = steps;
      rec.epsilon = eps;
      rec.loss = loss_n ? loss_sum / static_cast<double>(loss_n) : 0.0;
      rec.optimal_fraction = dqn_policy_score(agent, table, eval_rng).optimal_fraction;
      result.records.push_back(rec);
      loss_sum = 0.0;
      loss_n = 0;
    }
  }
  return result;
}

struct DqnTransferResult {
  int board_size = 0;
  bool transferable = true;  // false for hot-family nets off their training board
  PolicyScore score;
  double random_baseline = 0.0;
  MatchResult vs_random;
};

// Frozen greedy play on each board: oracle score over all Hot states plus
// `games` games against the random agent.
inline std::vector<DqnTransferResult> dqn_evaluate_transfer(const DqnAgent& agent,
                                                            const std::vector<GameSpec>& specs,
                                                            int games, Rng& rng) {
  std::vector<DqnTransferResult> out;
  for (const auto& spec : specs) {
    DqnTransferResult r;
    r.board_size = spec.board_size;
    const HotColdTable table = solve_retrograde(spec);
    r.random_baseline = random_baseline(table);
    if (!agent.supports(spec.board_size)) {
      r.transferable = false;
      out.push_back(r);
      continue;
    }
    r.score = dqn_policy_score(agent, table, rng);
    r.vs_random = evaluate_matchup(dqn_agent(agent), random_agent(), spec, games, rng);
    out.push_back(r);
  }
  return out;
}

}  // namespace hotcold
