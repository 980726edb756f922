#pragma once

// Experiment presets, transfer evaluations, grid search and the
// perturbation suite, plus the curve summaries they report.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hotcold/config.hpp"
#include "hotcold/dqn.hpp"
#include "hotcold/io.hpp"
#include "hotcold/matchup.hpp"
#include "hotcold/training.hpp"

namespace hotcold {

// fn(i) for i in [0, n) on up to hardware_concurrency threads. Each call
// must own its state; results land in index order.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---- curve summaries -------------------------------------------------------

// Per-iteration mean of optimal_fraction over runs of equal length.
inline std::vector<double> mean_curve(const std::vector<TrainingResult>& runs) {
  std::vector<double> m;
  for (const auto& r : runs) {
    if (m.empty()) m.assign(r.records.size(), 0.0);
    if (r.records.size() != m.size()) throw InvalidInput("mean_curve: runs differ in length");
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += r.records[i].optimal_fraction;
  }
  for (double& v : m) v /= static_cast<double>(runs.size());
  return m;
}

// Mean over the last fifth of the curve.
inline double plateau(const std::vector<double>& curve) {
  if (curve.empty()) return 0.0;
  const std::size_t from = curve.size() * 4 / 5;
  double s = 0.0;
  for (std::size_t i = from; i < curve.size(); ++i) s += curve[i];
  return s / static_cast<double>(curve.size() - from);
}

// Episodes consumed at the first iteration whose value reaches `level`.
inline std::optional<long long> episodes_to_level(const std::vector<double>& curve,
                                                  const std::vector<MetricsRecord>& records,
                                                  double level) {
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve[i] >= level) return records[i].episodes_consumed;
  return std::nullopt;
}

inline double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// ---- training presets ------------------------------------------------------

struct Arm {
  std::string name;
  TrainingConfig train;
};

// The training arms a preset runs, derived from the shared configuration.
inline std::vector<Arm> preset_arms(const ExperimentConfig& cfg) {
  auto with = [&](StrategistKind kind, HeuristicMode mode) {
    TrainingConfig t = cfg.train;
    t.strategist_kind = kind;
    t.strategist.mode = mode;
    return t;
  };
  const HeuristicMode hc = HeuristicMode::hot_and_cold;
  switch (cfg.preset) {
    case Preset::stumbler_only: return {{"stumbler-only", with(StrategistKind::none, hc)}};
    case Preset::stumbler_strategist:
    case Preset::board_transfer:
      return {{"stumbler-strategist", with(StrategistKind::learned, cfg.train.strategist.mode)}};
    case Preset::perfect_strategist: return {{"perfect-strategist", with(StrategistKind::oracle, hc)}};
    case Preset::heuristic_ablation:
      return {{"hot-only", with(StrategistKind::learned, HeuristicMode::hot_only)},
              {"cold-only", with(StrategistKind::learned, HeuristicMode::cold_only)}};
    case Preset::value_regression:
      return {{"value-regression", with(StrategistKind::learned, HeuristicMode::value_regression)}};
    default: return {};
  }
}

inline TrainingResult train_seed(const TrainingConfig& t, std::uint64_t seed,
                                 std::optional<StrategistState> initial = std::nullopt) {
  const HotColdTable table = solve_retrograde(GameSpec{t.rules, t.stumbler_board});
  return run_stumbler_strategist(t, seed, table, std::move(initial));
}

struct ArmResult {
  std::string arm;
  std::vector<TrainingResult> runs;  // one per seed, in cfg.seeds order
};

inline std::vector<ArmResult> run_arms(const std::vector<Arm>& arms,
                                       const std::vector<std::uint64_t>& seeds) {
  const std::size_t n = arms.size() * seeds.size();
  auto flat = parallel_map(n, [&](std::size_t i) {
    return train_seed(arms[i / seeds.size()].train, seeds[i % seeds.size()]);
  });
  std::vector<ArmResult> out;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    ArmResult r{arms[a].name, {}};
    for (std::size_t s = 0; s < seeds.size(); ++s) r.runs.push_back(std::move(flat[a * seeds.size() + s]));
    out.push_back(std::move(r));
  }
  return out;
}

namespace detail {

struct OutputDir {
  std::filesystem::path root;
  std::vector<std::string> files;

  std::ofstream open(const std::string& name) {
    files.push_back(name);
    return open_out(root / name);
  }
};

inline void write_training_outputs(OutputDir& dir, const std::vector<ArmResult>& arms,
                                   const TrainingConfig& any) {
  {
    auto os = dir.open("metrics.csv");
    write_metrics_header(os);
    for (const auto& a : arms)
      for (const auto& run : a.runs)
        for (const auto& rec : run.records) write_metrics_row(os, a.arm, rec);
  }
  {
    auto os = dir.open("timing.csv");
    write_timing_header(os);
    for (const auto& a : arms)
      for (const auto& run : a.runs)
        for (const auto& rec : run.records) write_timing_row(os, a.arm, rec);
  }
  for (const auto& a : arms) {
    for (const auto& run : a.runs) {
      const std::string tag = a.arm + "_seed" + std::to_string(run.records.front().seed);
      auto qs = dir.open("qtable_" + tag + ".txt");
      save_qtable({any.rules, any.stumbler_board, any.episodes, run.q}, qs);
      if (run.strategist) {
        auto ss = dir.open("strategist_" + tag + ".txt");
        save_strategist(*run.strategist, ss);
      }
    }
  }
}

inline void write_manifest(OutputDir& dir, const ExperimentConfig& cfg) {
  {
    auto os = dir.open("config.txt");
    os << to_config_text(cfg);
  }
  dir.files.push_back("manifest.json");
  auto os = open_out(dir.root / "manifest.json");
  os << make_manifest(cfg, dir.files).dump(2) << '\n';
}

}  // namespace detail

// ---- board transfer --------------------------------------------------------

struct TransferRow {
  int board_size = 0;
  double strategist_optimal = 0.0;
  double stumbler_optimal = 0.0;
  double random_baseline = 0.0;
  MatchResult strategist_vs_random;
  MatchResult strategist_vs_stumbler;
  MatchResult stumbler_vs_random;
};

// Frozen layers on each board. Optimal fractions are greedy choices scored
// over every Hot state of the board.
inline std::vector<TransferRow> evaluate_board_transfer(const QTable& q, const StrategistState& st,
                                                        Rules rules, const std::vector<int>& sizes,
                                                        int games, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TransferRow> out;
  const Agent strat = strategist_agent(st);
  const Agent stum = stumbler_agent(q);
  const Agent rnd = random_agent();
  for (int n : sizes) {
    const GameSpec spec{rules, n};
    const HotColdTable table = solve_retrograde(spec);
    const auto hot = table.positions(Label::hot);
    TransferRow row;
    row.board_size = n;
    row.random_baseline = random_baseline(table);
    const BiasField field = bias_field(st, spec);
    std::vector<Position> legal;
    row.strategist_optimal = score_policy(table, [&](Position s) {
                               legal = legal_moves(spec, s);
                               return strategist_move(field, legal, rng);
                             }, hot).optimal_fraction;
    row.stumbler_optimal = score_policy(table, [&](Position s) {
                             legal = legal_moves(spec, s);
                             return stumbler_greedy_move(q, s, legal, rng);
                           }, hot).optimal_fraction;
    row.strategist_vs_random = evaluate_matchup(strat, rnd, spec, games, rng);
    row.strategist_vs_stumbler = evaluate_matchup(strat, stum, spec, games, rng);
    row.stumbler_vs_random = evaluate_matchup(stum, rnd, spec, games, rng);
    out.push_back(std::move(row));
  }
  return out;
}

// ---- rule transfer ---------------------------------------------------------

struct RuleTransferResult {
  std::uint64_t seed = 0;
  TrainingResult with_transfer;
  TrainingResult without_transfer;
};

// Player learns `cfg.train.rules` against an independent, unbiased
// Q-learner, once starting from a Wythoff-trained strategist and once from a
// fresh one.
inline RuleTransferResult run_rule_transfer(const ExperimentConfig& cfg, std::uint64_t seed) {
  StrategistState pretrained;
  if (!cfg.pretrained.empty()) {
    pretrained = load_file<StrategistState>(cfg.pretrained, [](std::istream& is) { return load_strategist(is); });
  } else {
    TrainingConfig w = cfg.train;
    w.rules = Rules::wythoff;
    w.strategist_kind = StrategistKind::learned;
    w.opponent = OpponentKind::self_play;
    pretrained = *train_seed(w, seed).strategist;
  }
  TrainingConfig t = cfg.train;
  t.strategist_kind = StrategistKind::learned;
  t.opponent = OpponentKind::independent;
  t.opponent_biased = false;
  RuleTransferResult r;
  r.seed = seed;
  r.with_transfer = train_seed(t, seed, pretrained);
  r.without_transfer = train_seed(t, seed);
  return r;
}

// ---- DQN -------------------------------------------------------------------

struct DqnRun {
  std::uint64_t seed = 0;
  DqnResult result;
  std::vector<DqnTransferResult> transfer;
};

inline DqnRun run_dqn(const ExperimentConfig& cfg, std::uint64_t seed) {
  DqnRun run;
  run.seed = seed;
  run.result = dqn_train(cfg.dqn, GameSpec{cfg.train.rules, cfg.train.stumbler_board}, cfg.train.episodes, seed);
  std::vector<GameSpec> specs;
  for (int n : cfg.dqn_sizes) specs.push_back({cfg.train.rules, n});
  Rng rng(seed ^ 0x7e57ULL);
  run.transfer = dqn_evaluate_transfer(run.result.agent, specs, cfg.games, rng);
  return run;
}

// ---- grid search -----------------------------------------------------------

struct GridRange {
  std::string key;
  double lo = 0.0;
  double hi = 0.0;
  int samples = 1;
  bool integer = false;
};

// Stage order: stumbler, strategist, thresholds, influence, depth.
inline const std::vector<std::string>& grid_stages() {
  static const std::vector<std::string> s{"stumbler", "strategist", "thresholds", "influence", "depth"};
  return s;
}

// The swept intervals per stage; `samples` > 0 overrides every count.
inline std::vector<GridRange> default_grid_ranges(const std::string& stage, int samples = 0) {
  auto k = [&](int d) { return samples > 0 ? samples : d; };
  if (stage == "stumbler")
    return {{"epsilon", 0.1, 1.0, k(10)}, {"alpha_s", 0.01, 1.0, k(10)}, {"gamma", 0.1, 1.0, k(10)}};
  if (stage == "strategist")
    return {{"alpha_r", 0.001, 0.1, k(10)}, {"n_s", 100, 1000, k(3), true}, {"n_r", 100, 1000, k(3), true}};
  if (stage == "thresholds") return {{"v_cold", -1.0, 0.0, k(10)}, {"v_hot", 0.0, 1.0, k(10)}};
  if (stage == "influence") return {{"alpha_i", 0.01, 1.0, k(20)}};
  if (stage == "depth") return {{"hidden1", 15, 500, k(10), true}, {"hidden2", 0, 50, k(10), true}};
  throw ConfigError("unknown grid stage '" + stage + "'");
}

// Cell midpoints of `samples` equal slices, so open interval ends (a zero
// threshold, say) are never hit. lo == hi gives the single value lo.
inline std::vector<double> grid_values(const GridRange& r) {
  if (r.samples < 1) throw InvalidInput("grid range '" + r.key + "' needs at least one sample");
  if (r.hi < r.lo) throw InvalidInput("grid range '" + r.key + "' has hi < lo");
  std::vector<double> v;
  if (r.lo == r.hi) return {r.lo};
  for (int i = 0; i < r.samples; ++i) {
    double x = r.lo + (r.hi - r.lo) * (i + 0.5) / r.samples;
    if (r.integer) x = std::round(x);
    if (v.empty() || v.back() != x) v.push_back(x);
  }
  return v;
}

struct GridRow {
  std::vector<std::pair<std::string, std::string>> params;
  double score = 0.0;  // mean over seeds of the last-100-episode optimal fraction
  double score_sd = 0.0;
};

// Full cartesian sweep of one stage on top of `base`. The stumbler stage
// runs without a strategist. Rows come back best first; ties keep sweep
// order.
inline std::vector<GridRow> grid_search(const ExperimentConfig& base, const std::string& stage,
                                        const std::vector<GridRange>& ranges) {
  std::vector<std::vector<double>> axes;
  std::size_t combos = 1;
  for (const auto& r : ranges) {
    axes.push_back(grid_values(r));
    combos *= axes.back().size();
  }
  std::vector<ExperimentConfig> cfgs;
  std::vector<GridRow> rows(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    ExperimentConfig cfg = base;
    std::size_t rest = c;
    for (std::size_t d = ranges.size(); d-- > 0;) {
      const double v = axes[d][rest % axes[d].size()];
      rest /= axes[d].size();
      const std::string text = ranges[d].integer ? std::to_string(std::llround(v)) : detail::fmt(v);
      set_option(cfg, ranges[d].key, text);
      rows[c].params.insert(rows[c].params.begin(), {ranges[d].key, text});
    }
    cfg.train.strategist_kind = stage == "stumbler" ? StrategistKind::none : StrategistKind::learned;
    cfgs.push_back(std::move(cfg));
  }
  const std::size_t ns = base.seeds.size();
  auto finals = parallel_map(combos * ns, [&](std::size_t i) {
    return train_seed(cfgs[i / ns].train, base.seeds[i % ns]).final_optimal_fraction(100);
  });
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<double> v(finals.begin() + static_cast<long>(c * ns), finals.begin() + static_cast<long>((c + 1) * ns));
    rows[c].score = mean_of(v);
    rows[c].score_sd = sd_of(v);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) { return a.score > b.score; });
  return rows;
}

// Runs stages in order; each starts from the previous stage's winner.
inline std::vector<std::pair<std::string, std::vector<GridRow>>> grid_pipeline(
    ExperimentConfig base, const std::vector<std::string>& stages, int samples) {
  std::vector<std::pair<std::string, std::vector<GridRow>>> out;
  for (const auto& stage : stages) {
    auto rows = grid_search(base, stage, default_grid_ranges(stage, samples));
    for (const auto& [k, v] : rows.front().params) set_option(base, k, v);
    out.emplace_back(stage, std::move(rows));
  }
  return out;
}

// ---- perturbation suite ----------------------------------------------------

struct PerturbRow {
  std::string key;
  std::string value;
  double final_optimal = 0.0;
  bool expected_failure = false;
  bool numeric_failure = false;
};

struct PerturbSummary {
  std::string key;
  double perturbed_sd = 0.0;
  bool within_baseline = false;
};

struct PerturbationReport {
  std::vector<double> baseline;  // one final per seed
  double baseline_mean = 0.0;
  double baseline_sd = 0.0;
  std::vector<PerturbRow> rows;
  std::vector<PerturbSummary> summaries;
  // lr = 1 stumbler-only control against the strategist baseline: episodes
  // to reach 90% of the baseline plateau (nullopt = never).
  std::optional<long long> control_episodes;
  std::optional<long long> baseline_episodes;
};

// One parameter at a time over its sensitivity range, fixed seed
// (cfg.seeds.front()). alpha_r also gets a probe above 0.08, where training
// is expected to break down.
inline std::vector<GridRange> perturbation_ranges(int samples = 5) {
  return {{"epsilon", 0.01, 0.8, samples},  {"alpha_i", 0.01, 0.4, samples},
          {"alpha_s", 0.2, 0.6, samples},   {"alpha_r", 0.01, 0.05, samples},
          {"v_hot", 0.0, 0.5, samples},     {"v_cold", -0.5, 0.0, samples}};
}

inline PerturbationReport perturbation_suite(const ExperimentConfig& cfg,
                                             std::vector<GridRange> ranges = perturbation_ranges()) {
  TrainingConfig base = cfg.train;
  base.strategist_kind = StrategistKind::learned;
  PerturbationReport rep;

  struct Job {
    std::string key;
    std::string value;
    TrainingConfig train;
    bool expected_failure = false;
  };
  std::vector<Job> jobs;
  for (const auto& r : ranges) {
    for (double v : grid_values(r)) {
      ExperimentConfig c = cfg;
      c.train = base;
      const std::string text = r.integer ? std::to_string(std::llround(v)) : detail::fmt(v);
      set_option(c, r.key, text);
      jobs.push_back({r.key, text, c.train, false});
    }
  }
  {
    ExperimentConfig c = cfg;
    c.train = base;
    set_option(c, "alpha_r", "0.1");
    jobs.push_back({"alpha_r", "0.1", c.train, true});
  }
  const std::uint64_t fixed = cfg.seeds.front();
  auto baseline_runs = parallel_map(cfg.seeds.size(), [&](std::size_t i) { return train_seed(base, cfg.seeds[i]); });
  TrainingConfig control = base;
  control.strategist_kind = StrategistKind::none;
  control.stumbler.alpha_s = 1.0;
  auto control_runs = parallel_map(cfg.seeds.size(), [&](std::size_t i) { return train_seed(control, cfg.seeds[i]); });

  struct Outcome {
    double final_optimal;
    bool failed;
  };
  auto outcomes = parallel_map(jobs.size(), [&](std::size_t i) {
    try {
      return Outcome{train_seed(jobs[i].train, fixed).final_optimal_fraction(100), false};
    } catch (const NumericFailure&) {
      return Outcome{0.0, true};
    }
  });

  for (const auto& r : baseline_runs) rep.baseline.push_back(r.final_optimal_fraction(100));
  rep.baseline_mean = mean_of(rep.baseline);
  rep.baseline_sd = sd_of(rep.baseline);
  const auto [bmin, bmax] = std::minmax_element(rep.baseline.begin(), rep.baseline.end());
  // Widen the observed baseline span by one sd, and by at least 0.02.
  const double slack = std::max(rep.baseline_sd, 0.02);
  const double lo = *bmin - slack;
  const double hi = *bmax + slack;

  std::map<std::string, std::vector<double>> by_key;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    rep.rows.push_back({jobs[i].key, jobs[i].value, outcomes[i].final_optimal, jobs[i].expected_failure,
                        outcomes[i].failed});
    if (jobs[i].expected_failure) continue;
    if (!by_key.contains(jobs[i].key)) order.push_back(jobs[i].key);
    by_key[jobs[i].key].push_back(outcomes[i].failed ? -1.0 : outcomes[i].final_optimal);
  }
  for (const auto& k : order) {
    const auto& v = by_key[k];
    const bool inside = std::all_of(v.begin(), v.end(), [&](double x) { return x >= lo && x <= hi; });
    rep.summaries.push_back({k, sd_of(v), inside});
  }

  const auto bcurve = mean_curve(baseline_runs);
  const double level = 0.9 * plateau(bcurve);
  rep.baseline_episodes = episodes_to_level(bcurve, baseline_runs.front().records, level);
  rep.control_episodes = episodes_to_level(mean_curve(control_runs), control_runs.front().records, level);
  return rep;
}

// ---- preset runner ---------------------------------------------------------

// Runs the preset across cfg.seeds and writes everything under cfg.out_dir.
// Returns the written file names (relative to out_dir).
inline std::vector<std::string> run_preset(const ExperimentConfig& cfg) {
  validate(cfg);
  detail::OutputDir dir{cfg.out_dir, {}};
  std::filesystem::create_directories(dir.root);

  switch (cfg.preset) {
    case Preset::stumbler_only:
    case Preset::stumbler_strategist:
    case Preset::perfect_strategist:
    case Preset::heuristic_ablation:
    case Preset::value_regression: {
      const auto arms = preset_arms(cfg);
      detail::write_training_outputs(dir, run_arms(arms, cfg.seeds), arms.front().train);
      break;
    }
    case Preset::board_transfer: {
      const auto arms = preset_arms(cfg);
      auto results = run_arms(arms, cfg.seeds);
      detail::write_training_outputs(dir, results, arms.front().train);
      const auto& runs = results.front().runs;
      auto rows = parallel_map(runs.size(), [&](std::size_t i) {
        return evaluate_board_transfer(runs[i].q, *runs[i].strategist, cfg.train.rules, cfg.transfer_sizes,
                                       cfg.games, cfg.seeds[i] ^ 0x7e57ULL);
      });
      auto os = dir.open("transfer.csv");
      os << "seed,board_size,strategist_optimal,stumbler_optimal,random_baseline,games,"
            "strategist_vs_random_wins,strategist_vs_stumbler_wins,stumbler_vs_random_wins\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& r : rows[i])
          os << cfg.seeds[i] << ',' << r.board_size << ',' << detail::exact(r.strategist_optimal) << ','
             << detail::exact(r.stumbler_optimal) << ',' << detail::exact(r.random_baseline) << ',' << cfg.games
             << ',' << r.strategist_vs_random.a_wins << ',' << r.strategist_vs_stumbler.a_wins << ','
             << r.stumbler_vs_random.a_wins << '\n';
      break;
    }
    case Preset::rule_transfer: {
      auto results = parallel_map(cfg.seeds.size(), [&](std::size_t i) { return run_rule_transfer(cfg, cfg.seeds[i]); });
      std::vector<ArmResult> arms{{"with-transfer", {}}, {"without-transfer", {}}};
      for (auto& r : results) {
        arms[0].runs.push_back(std::move(r.with_transfer));
        arms[1].runs.push_back(std::move(r.without_transfer));
      }
      detail::write_training_outputs(dir, arms, cfg.train);
      break;
    }
    case Preset::dqn: {
      auto runs = parallel_map(cfg.seeds.size(), [&](std::size_t i) { return run_dqn(cfg, cfg.seeds[i]); });
      {
        auto os = dir.open("dqn.csv");
        os << "# schema hotcold-dqn-metrics v1\narch,seed,episodes,steps,epsilon,loss,optimal_fraction\n";
        for (const auto& r : runs)
          for (const auto& rec : r.result.records)
            os << cfg.dqn.arch << ',' << r.seed << ',' << rec.episodes << ',' << rec.steps << ','
               << detail::exact(rec.epsilon) << ',' << detail::exact(rec.loss) << ','
               << detail::exact(rec.optimal_fraction) << '\n';
      }
      {
        auto os = dir.open("dqn_transfer.csv");
        os << "arch,seed,board_size,transferable,optimal_fraction,random_baseline,games,wins_vs_random\n";
        for (const auto& r : runs)
          for (const auto& t : r.transfer)
            os << cfg.dqn.arch << ',' << r.seed << ',' << t.board_size << ',' << (t.transferable ? 1 : 0) << ','
               << detail::exact(t.score.optimal_fraction) << ',' << detail::exact(t.random_baseline) << ','
               << t.vs_random.games << ',' << t.vs_random.a_wins << '\n';
      }
      for (const auto& r : runs) {
        auto os = dir.open("dqn_" + cfg.dqn.arch + "_seed" + std::to_string(r.seed) + ".txt");
        save_dqn(r.result.agent, os);
      }
      break;
    }
    case Preset::grid_search: {
      std::vector<std::string> stages;
      if (cfg.grid_stage == "all")
        stages = grid_stages();
      else
        stages = {cfg.grid_stage};
      const auto results = grid_pipeline(cfg, stages, cfg.grid_samples);
      auto os = dir.open("grid.csv");
      os << "stage,rank,params,score,score_sd\n";
      for (const auto& [stage, rows] : results) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
          std::string p;
          for (const auto& [k, v] : rows[i].params) p += (p.empty() ? "" : ";") + k + "=" + v;
          os << stage << ',' << i + 1 << ',' << p << ',' << detail::exact(rows[i].score) << ','
             << detail::exact(rows[i].score_sd) << '\n';
        }
      }
      break;
    }
  }
  detail::write_manifest(dir, cfg);
  return dir.files;
}

inline void write_perturbation_report(const PerturbationReport& rep, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "kind,key,value,final_optimal,note\n";
  for (std::size_t i = 0; i < rep.baseline.size(); ++i)
    os << "baseline,seed," << i << ',' << detail::exact(rep.baseline[i]) << ",\n";
  for (const auto& r : rep.rows)
    os << "perturbed," << r.key << ',' << r.value << ',' << detail::exact(r.final_optimal) << ','
       << (r.numeric_failure ? "numeric-failure" : r.expected_failure ? "expected-failure" : "") << '\n';
  for (const auto& s : rep.summaries)
    os << "summary," << s.key << ",sd," << detail::exact(s.perturbed_sd) << ','
       << (s.within_baseline ? "within-baseline" : "outside-baseline") << '\n';
  auto opt = [](const std::optional<long long>& e) { return e ? std::to_string(*e) : std::string("never"); };
  os << "control,alpha_s=1 stumbler-only,episodes_to_level," << opt(rep.control_episodes) << ",\n";
  os << "control,strategist baseline,episodes_to_level," << opt(rep.baseline_episodes) << ",\n";
}

}  // namespace hotcold
