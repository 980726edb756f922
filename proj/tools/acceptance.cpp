// Acceptance suite: one PASS/FAIL line per criterion, at pinned thresholds.
// Exits 0 after reporting unless --strict is given, in which case any FAIL
// gives exit code 1.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hotcold/hotcold.hpp"

using namespace hotcold;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr double kOracleSolveSeconds = 30.0;
constexpr double kSpeedupRatio = 0.67;
constexpr double kPlateauGap = 0.05;
constexpr double kDominanceBand = 0.05;
constexpr double kTransferBand = 0.15;
constexpr double kRandomBand = 0.05;
constexpr double kStrategistVsRandom = 0.90;
constexpr int kTransferGames = 200;
constexpr double kAblationInfluence = 0.1;
constexpr double kDqnVsRandom = 0.80;
constexpr int kDqnGames = 100;
constexpr double kDqnDrop = 0.50;
constexpr long long kDqnEpisodes = 5000;
constexpr double kGradTolerance = 1e-4;
constexpr long long kQUpdates = 1'000'000;
constexpr double kT4 = 2.132;  // one-sided 5% critical value, 4 degrees of freedom

int failures = 0;
std::ostringstream report;

void verdict(bool ok, const std::string& id, const std::string& detail) {
  if (!ok) ++failures;
  const std::string line = std::string(ok ? "PASS" : "FAIL") + " " + id + " " + detail;
  std::cout << line << std::endl;
  report << line << '\n';
}

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1() {
  std::size_t mismatches = 0;
  double t500 = 0.0;
  for (int n : {25, 100, 500}) {
    const GameSpec spec{Rules::wythoff, n};
    const auto t0 = std::chrono::steady_clock::now();
    const HotColdTable table = solve_retrograde(spec);
    if (n == 500) t500 = seconds_since(t0);
    for (std::size_t i = 0; i < spec.cell_count(); ++i)
      mismatches += table.is_cold(spec.at(i)) != wythoff_cold_closed_form(spec.at(i));
  }
  verdict(mismatches == 0 && t500 < kOracleSolveSeconds, "C1 oracle-exactness",
          "mismatches=" + std::to_string(mismatches) + " solve500=" + f3(t500) + "s (limit " +
              f3(kOracleSolveSeconds) + "s)");
}

void criterion2() {
  std::size_t cold_to_cold = 0, hot_without_cold = 0, corner_not_cold = 0;
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const GameSpec spec{r, 100};
    const HotColdTable table = solve_retrograde(spec);
    corner_not_cold += !table.is_cold({0, 0});
    for (std::size_t i = 0; i < spec.cell_count(); ++i) {
      const Position p = spec.at(i);
      bool any_cold = false;
      for_each_move(r, p, [&](Position t) {
        const bool c = table.is_cold(t);
        any_cold = any_cold || c;
        if (c && table.is_cold(p)) ++cold_to_cold;
        return true;
      });
      if (!table.is_cold(p) && !any_cold) ++hot_without_cold;
    }
  }
  verdict(cold_to_cold == 0 && hot_without_cold == 0 && corner_not_cold == 0, "C2 oracle-structure",
          "cold->cold=" + std::to_string(cold_to_cold) + " hot-without-cold-move=" +
              std::to_string(hot_without_cold) + " corner-not-cold=" + std::to_string(corner_not_cold) +
              " (3 games, N=100 exhaustive)");
}

struct LearningRuns {
  std::vector<TrainingResult> base, learned, oracle, hot_only, cold_only;
  double seconds = 0.0;
};

LearningRuns learning_runs(const ExperimentConfig& desk) {
  LearningRuns out;
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [&](StrategistKind kind, HeuristicMode mode) {
    TrainingConfig t = desk.train;
    t.strategist_kind = kind;
    t.strategist.mode = mode;
    return parallel_map(desk.seeds.size(), [&](std::size_t i) { return train_seed(t, desk.seeds[i]); });
  };
  out.base = run(StrategistKind::none, HeuristicMode::hot_and_cold);
  out.learned = run(StrategistKind::learned, HeuristicMode::hot_and_cold);
  out.seconds = seconds_since(t0);
  out.oracle = run(StrategistKind::oracle, HeuristicMode::hot_and_cold);
  out.hot_only = run(StrategistKind::learned, HeuristicMode::hot_only);
  out.cold_only = run(StrategistKind::learned, HeuristicMode::cold_only);
  return out;
}

std::string episodes_text(const std::optional<long long>& e) { return e ? std::to_string(*e) : "never"; }

void criterion3(const LearningRuns& r) {
  const auto base = mean_curve(r.base);
  const auto learned = mean_curve(r.learned);
  const double pb = plateau(base), pl = plateau(learned);
  const double level = 0.9 * pb;
  const auto tb = episodes_to_level(base, r.base.front().records, level);
  const auto tl = episodes_to_level(learned, r.learned.front().records, level);
  const double ratio = tb && tl ? static_cast<double>(*tl) / static_cast<double>(*tb) : INFINITY;
  verdict(ratio <= kSpeedupRatio && std::abs(pb - pl) <= kPlateauGap, "C3 learning-speedup",
          "episodes-to-90%: learned=" + episodes_text(tl) + " stumbler-only=" + episodes_text(tb) +
              " ratio=" + f3(ratio) + " (<= " + f3(kSpeedupRatio) + ") plateaus " + f3(pl) + "/" + f3(pb) +
              " (gap <= " + f3(kPlateauGap) + ") runtime=" + f3(r.seconds) + "s");
}

void criterion4(const LearningRuns& r) {
  const auto learned = mean_curve(r.learned);
  const auto oracle = mean_curve(r.oracle);
  double worst = INFINITY;
  std::size_t worst_at = 0;
  for (std::size_t i = 0; i < learned.size(); ++i) {
    if (oracle[i] - learned[i] < worst) {
      worst = oracle[i] - learned[i];
      worst_at = i;
    }
  }
  verdict(worst >= -kDominanceBand, "C4 perfect-strategist-dominance",
          "min(oracle - learned)=" + f3(worst) + " at iteration " + std::to_string(worst_at) + " of " +
              std::to_string(learned.size()) + " (>= -" + f3(kDominanceBand) + ")");
}

void criterion5(const LearningRuns& r) {
  const std::vector<int> sizes{50, 150, 250};
  std::vector<double> strat(sizes.size(), 0.0), stum(sizes.size(), 0.0), base(sizes.size(), 0.0);
  double min_win = 1.0;
  const double n = static_cast<double>(r.learned.size());
  for (std::size_t s = 0; s < r.learned.size(); ++s) {
    const auto rows = evaluate_board_transfer(r.learned[s].q, *r.learned[s].strategist, Rules::wythoff, sizes,
                                              kTransferGames, 0x7e57ULL + s);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      strat[i] += rows[i].strategist_optimal / n;
      stum[i] += rows[i].stumbler_optimal / n;
      base[i] = rows[i].random_baseline;
      min_win = std::min(min_win, rows[i].strategist_vs_random.a_win_fraction());
    }
  }
  bool flat = true, near_random = true;
  std::string detail = "strategist/stumbler/random:";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    flat = flat && std::abs(strat[i] - strat[0]) <= kTransferBand;
    near_random = near_random && std::abs(stum[i] - base[i]) <= kRandomBand;
    detail += " N=" + std::to_string(sizes[i]) + " " + f3(strat[i]) + "/" + f3(stum[i]) + "/" + f3(base[i]);
  }
  detail += " | strategist within " + f3(kTransferBand) + " of N=50: " + (flat ? "yes" : "no");
  detail += " | stumbler within " + f3(kRandomBand) + " of random: " + (near_random ? "yes" : "no");
  detail += " | min strategist win vs random " + f3(min_win) + " (> " + f3(kStrategistVsRandom) + ", " +
            std::to_string(kTransferGames) + " games per seed and size)";
  verdict(flat && near_random && min_win > kStrategistVsRandom, "C5 board-transfer", detail);
}

// Per-seed area under the learning curve; a speedup shows as a positive
// paired difference against stumbler-only.
double paired_t(const std::vector<TrainingResult>& a, const std::vector<TrainingResult>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double sa = 0.0, sb = 0.0;
    for (const auto& rec : a[i].records) sa += rec.optimal_fraction;
    for (const auto& rec : b[i].records) sb += rec.optimal_fraction;
    d.push_back((sa - sb) / static_cast<double>(a[i].records.size()));
  }
  const double sd = sd_of(d);
  if (sd == 0.0) return mean_of(d) > 0 ? INFINITY : 0.0;
  return mean_of(d) / (sd / std::sqrt(static_cast<double>(d.size())));
}

void criterion6(const LearningRuns& r) {
  const auto base = mean_curve(r.base);
  const double level = 0.9 * plateau(base);
  const auto tb = episodes_to_level(base, r.base.front().records, level);
  bool ok = true;
  std::string detail;
  for (const auto* arm : {&r.hot_only, &r.cold_only}) {
    const std::string name = arm == &r.hot_only ? "hot-only" : "cold-only";
    std::vector<double> finals;
    for (const auto& run : *arm) finals.push_back(run.records.back().influence);
    const double mean_i = mean_of(finals);
    const auto ta = episodes_to_level(mean_curve(*arm), arm->front().records, level);
    const double ratio = ta && tb ? static_cast<double>(*ta) / static_cast<double>(*tb) : INFINITY;
    const double t = paired_t(*arm, r.base);
    const bool arm_ok = mean_i < kAblationInfluence && ratio > kSpeedupRatio && t < kT4;
    ok = ok && arm_ok;
    detail += name + ": final I=" + f3(mean_i) + " ratio=" + f3(ratio) + " paired t=" + f3(t) + "; ";
  }
  detail += "(I < " + f3(kAblationInfluence) + ", ratio > " + f3(kSpeedupRatio) + ", t < " + f3(kT4) + ")";
  verdict(ok, "C6 heuristic-ablation", detail);
}

void criterion7() {
  DqnConfig cfg;
  cfg.arch = "optuna";
  const auto res = dqn_train(cfg, GameSpec{Rules::wythoff, 15}, kDqnEpisodes, 0);
  Rng rng(0x7e57ULL);
  const auto rows = dqn_evaluate_transfer(res.agent, {GameSpec{Rules::wythoff, 15}, GameSpec{Rules::wythoff, 65}},
                                          kDqnGames, rng);
  const double win = rows[0].vs_random.a_win_fraction();
  const double o15 = rows[0].score.optimal_fraction, o65 = rows[1].score.optimal_fraction;
  const double drop = o15 > 0 ? 1.0 - o65 / o15 : 0.0;
  verdict(win >= kDqnVsRandom && drop >= kDqnDrop, "C7 dqn-controls",
          "optuna arch, " + std::to_string(kDqnEpisodes) + " episodes: wins vs random at N=15 " + f3(win) +
              " (>= " + f3(kDqnVsRandom) + ", " + std::to_string(kDqnGames) + " games); optimal N=15 " +
              f3(o15) + " N=65 " + f3(o65) + " drop " + f3(drop) + " (>= " + f3(kDqnDrop) + ")");
}

void criterion8() {
  std::mt19937_64 rng(8);
  double worst_grad = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::vector<std::size_t> dims{1 + rng() % 4};
    const std::size_t hidden = 1 + rng() % 3;
    for (std::size_t h = 0; h < hidden; ++h) dims.push_back(2 + rng() % 8);
    dims.push_back(1 + rng() % 3);
    const Mlp net(dims, k % 2 ? OutputActivation::tanh : OutputActivation::identity, rng());
    Batch b;
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int i = 0; i < 4; ++i) {
      std::vector<double> x(dims.front()), y(dims.back());
      for (double& v : x) v = nd(rng);
      for (double& v : y) v = nd(rng) * 0.5;
      b.inputs.push_back(x);
      b.targets.push_back(y);
    }
    worst_grad = std::max(worst_grad, grad_check(net, b, 1e-5));
  }

  const GameSpec spec{Rules::wythoff, 15};
  QTable q;
  double qmin = 0.0, qmax = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (long long i = 0; i < kQUpdates; ++i) {
    const Position s = random_start(spec, rng);
    const auto legal = legal_moves(spec, s);
    const Position a = legal[rng() % legal.size()];
    // Rewards as the game hands them out: +1 for the winning move, -1 when
    // the reply won, otherwise 0 with the state after a random reply.
    int reward = 1;
    std::optional<Position> next;
    if (!is_terminal(a)) {
      const auto l2 = legal_moves(spec, a);
      const Position reply = l2[rng() % l2.size()];
      reward = is_terminal(reply) ? -1 : 0;
      if (reward == 0) next = reply;
    }
    q_update(q, spec, s, a, reward, next, std::max(u(rng), 1e-9), u(rng));
    const double v = q.get(s, a);
    qmin = std::min(qmin, v);
    qmax = std::max(qmax, v);
  }

  // Round trips through text.
  bool round_trip = true;
  {
    std::stringstream ss;
    save_qtable({Rules::wythoff, 15, kQUpdates, q}, ss);
    const QTable back = load_qtable(ss).q;
    round_trip = round_trip && back == q;
    for (std::size_t i = 0; i < spec.cell_count() && round_trip; ++i) {
      const Position s = spec.at(i);
      if (is_terminal(s)) continue;
      const auto legal = legal_moves(spec, s);
      for (Position a : legal) round_trip = round_trip && back.get(s, a) == q.get(s, a);
    }
  }
  {
    StrategistConfig sc;
    StrategistState st = make_strategist(sc, 3);
    st.influence = 0.6;
    std::stringstream ss;
    save_strategist(st, ss);
    const StrategistState back = load_strategist(ss);
    const GameSpec big{Rules::wythoff, 60};
    const auto a = bias_field(st, big), b = bias_field(back, big);
    round_trip = round_trip && back == st &&
                 std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
  }
  {
    const DqnAgent agent = make_dqn(find_arch("xy3"), 15, 4);
    std::stringstream ss;
    save_dqn(agent, ss);
    const DqnAgent back = load_dqn(ss);
    round_trip = round_trip && back.net == agent.net && back.arch.name == agent.arch.name;
  }
  {
    const HotColdTable t = solve_retrograde({Rules::euclid, 40});
    std::stringstream ss;
    save_oracle(t, ss);
    round_trip = round_trip && load_oracle(ss) == t;
  }
  verdict(worst_grad < kGradTolerance && qmin >= -1.0 && qmax <= 1.0 && round_trip, "C8 numerics",
          "grad_check max rel err " + [&] {
            char b[32];
            std::snprintf(b, sizeof b, "%.2e", worst_grad);
            return std::string(b);
          }() + " (< 1e-4, 20 nets); Q range [" + f3(qmin) + ", " + f3(qmax) + "] over " +
              std::to_string(kQUpdates) + " updates; round trips " + (round_trip ? "identical" : "DIFFER"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9() {
  const fs::path root = fs::temp_directory_path() / ("hotcold_acceptance_" + std::to_string(::getpid()));
  bool identical = true;
  std::string detail;
  for (Preset p : {Preset::stumbler_only, Preset::stumbler_strategist, Preset::perfect_strategist,
                   Preset::heuristic_ablation, Preset::value_regression, Preset::rule_transfer, Preset::dqn}) {
    ExperimentConfig cfg;
    cfg.preset = p;
    scale_budget(cfg, 3000);
    cfg.out_of_range = {"n_s"};
    cfg.seeds = {11};
    cfg.games = 20;
    const std::string file = p == Preset::dqn ? "dqn.csv" : "metrics.csv";
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      cfg.out_dir = (root / (std::string(to_string(p)) + "_" + std::to_string(rep))).string();
      run_preset(cfg);
      const std::string text = slurp(fs::path(cfg.out_dir) / file);
      if (rep == 0) first = text;
      else if (text != first || text.empty()) {
        identical = false;
        detail += std::string(to_string(p)) + " differs; ";
      }
    }
  }
  fs::remove_all(root);
  verdict(identical, "C9 reproducibility",
          identical ? "7 presets rerun with seed 11: metrics CSV byte-identical" : detail);
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::string out_file;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
      out_file = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::atoi(tok.c_str() + (tok[0] == 'C' ? 1 : 0)));
    } else {
      std::cerr << "usage: acceptance [--strict] [--report FILE] [--only C1,C5,...]\n";
      return 2;
    }
  }
  auto want = [&](int c) { return only.empty() || only.contains(c); };
  const ExperimentConfig desk = desk_config(Preset::stumbler_strategist);
  std::cout << "desk config: " << desk.seeds.size() << " seeds x " << desk.train.episodes
            << " episodes, n_s=" << desk.train.n_s << ", gamma=" << desk.train.stumbler.gamma << std::endl;

  if (want(1)) criterion1();
  if (want(2)) criterion2();
  if (want(3) || want(4) || want(5) || want(6)) {
    const LearningRuns runs = learning_runs(desk);
    if (want(3)) criterion3(runs);
    if (want(4)) criterion4(runs);
    if (want(5)) criterion5(runs);
    if (want(6)) criterion6(runs);
  }
  if (want(7)) criterion7();
  if (want(8)) criterion8();
  if (want(9)) criterion9();

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAIL") << std::endl;
  if (!out_file.empty()) {
    std::ofstream os(out_file);
    os << report.str();
  }
  return strict && failures > 0 ? 1 : 0;
}
