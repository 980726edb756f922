#pragma once

// Experiment configuration: key=value text, defaults, validation and the
// tuning-range check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hotcold/dqn.hpp"
#include "hotcold/training.hpp"

namespace hotcold {

enum class Preset {
  stumbler_only,
  stumbler_strategist,
  perfect_strategist,
  heuristic_ablation,
  value_regression,
  board_transfer,
  rule_transfer,
  dqn,
  grid_search,
};

inline std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::stumbler_only: return "stumbler-only";
    case Preset::stumbler_strategist: return "stumbler-strategist";
    case Preset::perfect_strategist: return "perfect-strategist";
    case Preset::heuristic_ablation: return "heuristic-ablation";
    case Preset::value_regression: return "value-regression";
    case Preset::board_transfer: return "board-transfer";
    case Preset::rule_transfer: return "rule-transfer";
    case Preset::dqn: return "dqn";
    case Preset::grid_search: return "grid-search";
  }
  return "?";
}

inline Preset parse_preset(std::string_view s) {
  for (Preset p : {Preset::stumbler_only, Preset::stumbler_strategist, Preset::perfect_strategist,
                   Preset::heuristic_ablation, Preset::value_regression, Preset::board_transfer,
                   Preset::rule_transfer, Preset::dqn, Preset::grid_search})
    if (to_string(p) == s) return p;
  throw ConfigError("unknown preset '" + std::string(s) + "'");
}

inline std::string_view to_string(OpponentKind k) {
  switch (k) {
    case OpponentKind::self_play: return "self-play";
    case OpponentKind::independent: return "independent";
    case OpponentKind::random: return "random";
  }
  return "?";
}

inline OpponentKind parse_opponent(std::string_view s) {
  if (s == "self-play") return OpponentKind::self_play;
  if (s == "independent") return OpponentKind::independent;
  if (s == "random") return OpponentKind::random;
  throw ConfigError("unknown opponent '" + std::string(s) + "'");
}

struct ExperimentConfig {
  Preset preset = Preset::stumbler_strategist;
  TrainingConfig train;
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "out";

  // board-transfer
  std::vector<int> transfer_sizes{15, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
  int games = 1000;

  // rule-transfer: Wythoff checkpoint to start from; empty means pretrain one
  // per seed with the same budget.
  std::string pretrained;

  DqnConfig dqn;
  std::vector<int> dqn_sizes{15, 65};

  std::string grid_stage = "stumbler";
  int grid_samples = 0;  // 0 = the per-stage default

  // Numeric fields allowed outside the tuning ranges.
  std::set<std::string> out_of_range;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(d))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return d;
}

inline long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return i;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline std::string fmt(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get = nullptr;
  // Tuning range for numeric fields; lo > hi means unchecked.
  double lo = 1.0;
  double hi = 0.0;
  std::function<double(const ExperimentConfig&)> number = nullptr;
};

#define HOTCOLD_NUM(KEY, MEMBER, LO, HI)                                                          \
  Field {                                                                                         \
    KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = parse_double(KEY, v); },      \
        [](const ExperimentConfig& c) { return fmt(c.MEMBER); }, LO, HI,                          \
        [](const ExperimentConfig& c) { return static_cast<double>(c.MEMBER); }                   \
  }
#define HOTCOLD_INT(KEY, MEMBER, LO, HI)                                                          \
  Field {                                                                                         \
    KEY,                                                                                          \
        [](ExperimentConfig& c, const std::string& v) {                                           \
          c.MEMBER = static_cast<decltype(c.MEMBER)>(parse_int(KEY, v));                          \
        },                                                                                        \
        [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }, LO, HI,               \
        [](const ExperimentConfig& c) { return static_cast<double>(c.MEMBER); }                   \
  }

// Ranges are the ones swept when the defaults were tuned; values outside
// must be listed in `out_of_range`.
inline const std::vector<Field>& fields() {
  static const std::vector<Field> f{
      {"preset", [](ExperimentConfig& c, const std::string& v) { c.preset = parse_preset(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.preset)); }},
      {"rules", [](ExperimentConfig& c, const std::string& v) { c.train.rules = parse_rules(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.train.rules)); }},
      HOTCOLD_INT("stumbler_board", train.stumbler_board, 1, 0),
      HOTCOLD_INT("influence_board", train.influence_board, 1, 0),
      HOTCOLD_INT("strategist_board", train.strategist.board, 1, 0),
      HOTCOLD_NUM("alpha_s", train.stumbler.alpha_s, 0.01, 1.0),
      HOTCOLD_NUM("epsilon", train.stumbler.epsilon0, 0.01, 1.0),
      HOTCOLD_NUM("gamma", train.stumbler.gamma, 0.1, 1.0),
      HOTCOLD_NUM("alpha_r", train.alpha_r, 0.001, 0.1),
      HOTCOLD_NUM("alpha_i", train.alpha_i, 0.01, 1.0),
      HOTCOLD_INT("n_s", train.n_s, 100, 1000),
      HOTCOLD_INT("n_r", train.n_r, 100, 1000),
      HOTCOLD_NUM("v_hot", train.strategist.v_hot, 0.0, 1.0),
      HOTCOLD_NUM("v_cold", train.strategist.v_cold, -1.0, 0.0),
      HOTCOLD_NUM("influence0", train.strategist.influence0, 1, 0),
      HOTCOLD_NUM("influence_floor", train.influence_floor, 1, 0),
      HOTCOLD_INT("hidden1", train.strategist.hidden1, 15, 500),
      HOTCOLD_INT("hidden2", train.strategist.hidden2, 0, 50),
      HOTCOLD_NUM("coord_scale", train.strategist.coord_scale, 1, 0),
      {"heuristic", [](ExperimentConfig& c, const std::string& v) { c.train.strategist.mode = parse_heuristic_mode(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.train.strategist.mode)); }},
      {"strategist",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "none") c.train.strategist_kind = StrategistKind::none;
         else if (v == "learned") c.train.strategist_kind = StrategistKind::learned;
         else if (v == "oracle") c.train.strategist_kind = StrategistKind::oracle;
         else throw ConfigError("strategist: expected none|learned|oracle, got '" + v + "'");
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.train.strategist_kind)); }},
      {"opponent", [](ExperimentConfig& c, const std::string& v) { c.train.opponent = parse_opponent(v); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.train.opponent)); }},
      {"opponent_biased",
       [](ExperimentConfig& c, const std::string& v) { c.train.opponent_biased = parse_bool("opponent_biased", v); },
       [](const ExperimentConfig& c) { return std::string(c.train.opponent_biased ? "true" : "false"); }},
      HOTCOLD_INT("episodes", train.episodes, 1, 0),
      {"seeds",
       [](ExperimentConfig& c, const std::string& v) {
         c.seeds.clear();
         for (const auto& t : split_list(v)) {
           const long long s = parse_int("seeds", t);
           if (s < 0) throw ConfigError("seeds: must be non-negative");
           c.seeds.push_back(static_cast<std::uint64_t>(s));
         }
       },
       [](const ExperimentConfig& c) { return join(c.seeds); }},
      {"out", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
       [](const ExperimentConfig& c) { return c.out_dir; }},
      {"transfer_sizes",
       [](ExperimentConfig& c, const std::string& v) {
         c.transfer_sizes.clear();
         for (const auto& t : split_list(v)) c.transfer_sizes.push_back(static_cast<int>(parse_int("transfer_sizes", t)));
       },
       [](const ExperimentConfig& c) { return join(c.transfer_sizes); }},
      HOTCOLD_INT("games", games, 1, 0),
      {"pretrained", [](ExperimentConfig& c, const std::string& v) { c.pretrained = v; },
       [](const ExperimentConfig& c) { return c.pretrained; }},
      {"dqn_arch", [](ExperimentConfig& c, const std::string& v) { c.dqn.arch = v; },
       [](const ExperimentConfig& c) { return c.dqn.arch; }},
      HOTCOLD_NUM("dqn_alpha", dqn.alpha, 0.0025, 0.25),
      HOTCOLD_NUM("dqn_epsilon", dqn.epsilon0, 0.1, 0.5),
      HOTCOLD_NUM("dqn_gamma", dqn.gamma, 0.1, 0.5),
      HOTCOLD_INT("replay_capacity", dqn.replay_capacity, 1, 0),
      HOTCOLD_INT("batch", dqn.batch, 1, 0),
      HOTCOLD_INT("target_sync", dqn.target_sync, 1, 0),
      HOTCOLD_INT("eval_every", dqn.eval_every, 1, 0),
      {"dqn_sizes",
       [](ExperimentConfig& c, const std::string& v) {
         c.dqn_sizes.clear();
         for (const auto& t : split_list(v)) c.dqn_sizes.push_back(static_cast<int>(parse_int("dqn_sizes", t)));
       },
       [](const ExperimentConfig& c) { return join(c.dqn_sizes); }},
      {"grid_stage", [](ExperimentConfig& c, const std::string& v) { c.grid_stage = v; },
       [](const ExperimentConfig& c) { return c.grid_stage; }},
      HOTCOLD_INT("grid_samples", grid_samples, 1, 0),
      {"out_of_range",
       [](ExperimentConfig& c, const std::string& v) {
         c.out_of_range.clear();
         for (const auto& t : split_list(v)) c.out_of_range.insert(t);
       },
       [](const ExperimentConfig& c) {
         return join(std::vector<std::string>(c.out_of_range.begin(), c.out_of_range.end()));
       }},
  };
  return f;
}

#undef HOTCOLD_NUM
#undef HOTCOLD_INT

}  // namespace detail

inline void set_option(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : detail::fields()) {
    if (f.key == key) {
      try {
        f.set(cfg, detail::trim(value));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
      }
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

// Every key in a fixed order, as it would be written to a config file.
inline std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : detail::fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

inline std::string to_config_text(const ExperimentConfig& cfg) {
  std::string s;
  for (const auto& [k, v] : config_entries(cfg)) s += k + "=" + v + "\n";
  return s;
}

// key=value lines; blank lines and '#' comments ignored. Later keys win.
inline void apply_config_text(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    try {
      set_option(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

// Numeric fields outside their tuning range and not listed in out_of_range.
inline std::vector<std::string> range_violations(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  for (const auto& f : detail::fields()) {
    if (!f.number || f.lo > f.hi || cfg.out_of_range.contains(f.key)) continue;
    const double v = f.number(cfg);
    if (v < f.lo || v > f.hi)
      bad.push_back(f.key + "=" + f.get(cfg) + " outside [" + detail::fmt(f.lo) + ", " +
                    detail::fmt(f.hi) + "]");
  }
  return bad;
}

// Collects every problem before throwing so the message lists them all.
inline void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> problems = range_violations(cfg);
  for (const auto& k : cfg.out_of_range) {
    bool known = false;
    for (const auto& f : detail::fields()) known = known || (f.key == k && f.number);
    if (!known) problems.push_back("out_of_range names unknown numeric key '" + k + "'");
  }
  auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      problems.push_back(e.what());
    }
  };
  if (cfg.preset != Preset::dqn) check([&] { validate(cfg.train); });
  check([&] { cfg.dqn.validate(); });
  if (cfg.seeds.empty()) problems.push_back("seeds: at least one seed required");
  if (cfg.out_dir.empty()) problems.push_back("out: output directory required");
  for (int n : cfg.transfer_sizes)
    if (n < 2 || n > 2000) problems.push_back("transfer_sizes: " + std::to_string(n) + " not in [2, 2000]");
  for (int n : cfg.dqn_sizes)
    if (n < 2 || n > 2000) problems.push_back("dqn_sizes: " + std::to_string(n) + " not in [2, 2000]");
  if (cfg.games < 1) problems.push_back("games must be >= 1");
  if (cfg.grid_samples < 0) problems.push_back("grid_samples must be >= 0");
  if (cfg.train.strategist.influence0 < 0.0 || cfg.train.strategist.influence0 > 1.0)
    problems.push_back("influence0 must be in [0, 1]");
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

// Scales a 75,000-episode configuration to a smaller budget, keeping the
// number of strategist updates: n_s shrinks in proportion.
inline void scale_budget(ExperimentConfig& cfg, long long episodes) {
  if (episodes < 1) throw ConfigError("scale_budget: episodes must be >= 1");
  const double f = static_cast<double>(episodes) / static_cast<double>(cfg.train.episodes);
  cfg.train.n_s = std::max(1, static_cast<int>(std::lround(cfg.train.n_s * f)));
  cfg.train.episodes = episodes;
}

// Desk scale: 5 seeds x 25,000 episodes.
inline ExperimentConfig desk_config(Preset preset) {
  ExperimentConfig cfg;
  cfg.preset = preset;
  scale_budget(cfg, 25'000);
  cfg.seeds = {0, 1, 2, 3, 4};
  return cfg;
}

}  // namespace hotcold
