// hotcold: command-line front end for the experiments.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hotcold/hotcold.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace hotcold;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_file;
  std::string out;
  std::vector<std::string> sets;
  bool desk = false;
};

// Config file first, then --set overrides, then the dedicated flags.
ExperimentConfig build_config(const Globals& g, std::optional<Preset> preset) {
  ExperimentConfig cfg;
  if (g.desk) cfg = desk_config(cfg.preset);
  if (!g.config_file.empty()) {
    std::ifstream in(g.config_file);
    if (!in) throw ConfigError("cannot read config file " + g.config_file);
    apply_config_text(cfg, in);
  }
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_option(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (preset) cfg.preset = *preset;
  if (g.seed) cfg.seeds = {*g.seed};
  if (!g.out.empty()) cfg.out_dir = g.out;
  return cfg;
}

void print_files(const ExperimentConfig& cfg, const std::vector<std::string>& files) {
  nlohmann::json j;
  j["status"] = "ok";
  j["out"] = cfg.out_dir;
  j["files"] = files;
  std::cout << j.dump() << '\n';
}

Agent parse_agent(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string path = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need_path = [&] {
    if (path.empty()) throw ConfigError("agent '" + kind + "' needs a file: " + kind + ":PATH");
  };
  if (kind == "random") return random_agent();
  if (kind == "oracle") return oracle_agent();
  if (kind == "stumbler") {
    need_path();
    return stumbler_agent(load_file<QTableArtifact>(path, [](std::istream& is) { return load_qtable(is); }).q);
  }
  if (kind == "strategist") {
    need_path();
    return strategist_agent(load_file<StrategistState>(path, [](std::istream& is) { return load_strategist(is); }));
  }
  if (kind == "dqn") {
    need_path();
    return dqn_agent(load_file<DqnAgent>(path, [](std::istream& is) { return load_dqn(is); }));
  }
  throw ConfigError("unknown agent '" + spec + "' (random, oracle, stumbler:PATH, strategist:PATH, dqn:PATH)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stumbler-strategist experiments on impartial games"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Run a single seed")->group("Global");
  app.add_option("--config", g.config_file, "key=value configuration file")->group("Global");
  app.add_option("--out", g.out, "Output directory")->group("Global");
  app.add_option("--set", g.sets, "Override one config key (key=value), repeatable")->group("Global");
  app.add_flag("--desk", g.desk, "Start from the desk-scale defaults (5 seeds, 25,000 episodes)")
      ->group("Global");

  std::string rules = "wythoff";
  int size = 15;

  auto* solve = app.add_subcommand("solve", "Label every position hot or cold and write the table");
  solve->add_option("--rules", rules, "wythoff, nim or euclid");
  solve->add_option("--size", size, "Board size N");

  std::string preset_name = "stumbler-strategist";
  auto* train = app.add_subcommand("train", "Run a training preset across seeds");
  train->add_option("--preset", preset_name,
                    "stumbler-only, stumbler-strategist, perfect-strategist, heuristic-ablation, "
                    "value-regression, board-transfer, rule-transfer, dqn, grid-search");

  std::string agent_a = "oracle", agent_b = "random";
  int games = 1000;
  auto* matchup = app.add_subcommand("matchup", "Play two frozen agents against each other");
  matchup->add_option("--a", agent_a, "random | oracle | stumbler:PATH | strategist:PATH | dqn:PATH");
  matchup->add_option("--b", agent_b, "Second agent, same forms");
  matchup->add_option("--rules", rules, "wythoff, nim or euclid");
  matchup->add_option("--size", size, "Board size N");
  matchup->add_option("--games", games, "Games, alternating the first mover");

  auto* transfer = app.add_subcommand("transfer", "Board-size transfer of frozen layers");

  std::string stage;
  int samples = 0;
  auto* grid = app.add_subcommand("grid", "Piece-wise grid search");
  grid->add_option("--stage", stage, "stumbler, strategist, thresholds, influence, depth or all");
  grid->add_option("--samples", samples, "Samples per parameter (0 = stage default)");

  int perturb_samples = 5;
  auto* perturb = app.add_subcommand("perturb", "One-at-a-time parameter perturbation suite");
  perturb->add_option("--samples", perturb_samples, "Values per parameter");

  std::string arch;
  long long episodes = 0;
  auto* dqn = app.add_subcommand("dqn", "Train a DQN baseline and test it on other board sizes");
  dqn->add_option("--arch", arch, "xy1..xy5, optuna, hot1..hot5");
  dqn->add_option("--rules", rules, "wythoff, nim or euclid");
  dqn->add_option("--size", size, "Training board size");
  dqn->add_option("--episodes", episodes, "Training episodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::json j{{"error", "usage"}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 2;
  }
  if (*seed_opt) g.seed = seed_value;

  try {
    if (*solve) {
      const GameSpec spec{parse_rules(rules), size};
      const auto t0 = std::chrono::steady_clock::now();
      const HotColdTable table = solve_retrograde(spec);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const fs::path out = g.out.empty() ? fs::path(".") : fs::path(g.out);
      const fs::path file = out / ("oracle_" + std::string(to_string(spec.rules)) + "_" + std::to_string(size) + ".csv");
      {
        auto os = open_out(file);
        save_oracle(table, os);
      }
      nlohmann::json j{{"status", "ok"},
                       {"rules", to_string(spec.rules)},
                       {"board", size},
                       {"cold", table.positions(Label::cold).size()},
                       {"hot", table.positions(Label::hot).size()},
                       {"random_baseline", random_baseline(table)},
                       {"seconds", secs},
                       {"file", file.string()}};
      if (spec.rules == Rules::wythoff) {
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < spec.cell_count(); ++i)
          mismatches += table.is_cold(spec.at(i)) != wythoff_cold_closed_form(spec.at(i));
        j["closed_form_mismatches"] = mismatches;
      }
      std::cout << j.dump() << '\n';
    } else if (*train) {
      const ExperimentConfig cfg = build_config(g, parse_preset(preset_name));
      print_files(cfg, run_preset(cfg));
    } else if (*transfer) {
      const ExperimentConfig cfg = build_config(g, Preset::board_transfer);
      print_files(cfg, run_preset(cfg));
    } else if (*grid) {
      ExperimentConfig cfg = build_config(g, Preset::grid_search);
      if (!stage.empty()) cfg.grid_stage = stage;
      if (samples > 0) cfg.grid_samples = samples;
      print_files(cfg, run_preset(cfg));
    } else if (*dqn) {
      ExperimentConfig cfg = build_config(g, Preset::dqn);
      if (!arch.empty()) cfg.dqn.arch = arch;
      if (dqn->count("--rules")) cfg.train.rules = parse_rules(rules);
      if (dqn->count("--size")) cfg.train.stumbler_board = size;
      if (episodes > 0) cfg.train.episodes = episodes;
      print_files(cfg, run_preset(cfg));
    } else if (*perturb) {
      const ExperimentConfig cfg = build_config(g, Preset::stumbler_strategist);
      validate(cfg);
      const auto rep = perturbation_suite(cfg, perturbation_ranges(perturb_samples));
      const fs::path out(cfg.out_dir);
      write_perturbation_report(rep, out / "perturb.csv");
      {
        auto os = open_out(out / "config.txt");
        os << to_config_text(cfg);
      }
      std::vector<std::string> files{"perturb.csv", "config.txt", "manifest.json"};
      nlohmann::json m = make_manifest(cfg, files);
      m["rerun"] = "hotcold perturb --config config.txt --samples " + std::to_string(perturb_samples);
      auto os = open_out(out / "manifest.json");
      os << m.dump(2) << '\n';
      print_files(cfg, files);
    } else if (*matchup) {
      Rng rng(g.seed.value_or(0));
      const GameSpec spec{parse_rules(rules), size};
      const MatchResult r = evaluate_matchup(parse_agent(agent_a), parse_agent(agent_b), spec, games, rng);
      nlohmann::json j{{"status", "ok"},          {"agent_a", r.agent_a},     {"agent_b", r.agent_b},
                       {"board_size", r.board_size}, {"games", r.games},       {"a_wins", r.a_wins},
                       {"a_win_fraction", r.a_win_fraction()}, {"illegal_a", r.illegal_a},
                       {"illegal_b", r.illegal_b}};
      if (!g.out.empty()) {
        auto os = open_out(fs::path(g.out) / "matchup.json");
        os << j.dump(2) << '\n';
      }
      std::cout << j.dump() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << nlohmann::json{{"error", "config"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << nlohmann::json{{"error", "invalid-input"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const LoadError& e) {
    std::cerr << nlohmann::json{{"error", "load"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  } catch (const NumericFailure& e) {
    std::cerr << nlohmann::json{{"error", "numeric"}, {"message", e.what()}}.dump() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
