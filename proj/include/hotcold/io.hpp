#pragma once

// Text artifacts: Q-tables, strategist checkpoints, DQN weights, oracle
// tables, metrics CSV and the run manifest.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hotcold/config.hpp"
#include "hotcold/dqn.hpp"
#include "hotcold/oracle.hpp"
#include "hotcold/strategist.hpp"
#include "hotcold/stumbler.hpp"
#include "hotcold/training.hpp"

namespace hotcold {

inline constexpr std::string_view kVersion = "0.1.0";

namespace detail {

// Shortest text that reads back to the same double.
inline std::string exact(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

inline std::pair<std::string, std::string> key_value(LineReader& r) {
  const std::string line = r.next();
  const auto sp = line.find(' ');
  if (sp == std::string::npos) r.fail("expected '<key> <value>'");
  return {line.substr(0, sp), line.substr(sp + 1)};
}

inline std::string expect_key(LineReader& r, const std::string& key) {
  auto [k, v] = key_value(r);
  if (k != key) r.fail("expected '" + key + "', found '" + k + "'");
  return v;
}

template <typename T, typename Parse>
T parse_or_fail(LineReader& r, const std::string& what, Parse&& parse) {
  try {
    return parse();
  } catch (const std::exception& e) {
    r.fail("bad " + what + ": " + e.what());
  }
}

inline long long to_ll(LineReader& r, const std::string& key, const std::string& v) {
  return parse_or_fail<long long>(r, key, [&] {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  });
}

inline double to_d(LineReader& r, const std::string& key, const std::string& v) {
  return parse_or_fail<double>(r, key, [&] {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  });
}

inline void check_header(LineReader& r, std::string_view expected) {
  const std::string h = r.next();
  if (h != expected) r.fail("expected header '" + std::string(expected) + "', found '" + h + "'");
}

}  // namespace detail

struct QTableArtifact {
  Rules rules = Rules::wythoff;
  int board = 15;
  long long episodes = 0;
  QTable q;
};

inline constexpr std::string_view kQTableFormat = "hotcold-qtable v1";

inline void save_qtable(const QTableArtifact& art, std::ostream& os) {
  os << kQTableFormat << '\n'
     << "rules " << to_string(art.rules) << '\n'
     << "board " << art.board << '\n'
     << "episodes " << art.episodes << '\n'
     << "entries " << art.q.size() << '\n'
     << "sx,sy,ax,ay,q\n";
  for (const auto& e : art.q.entries())
    os << e.state.x << ',' << e.state.y << ',' << e.action.x << ',' << e.action.y << ','
       << detail::exact(e.q) << '\n';
}

inline QTableArtifact load_qtable(std::istream& is) {
  detail::LineReader r{is, "qtable", 0};
  detail::check_header(r, kQTableFormat);
  QTableArtifact art;
  art.rules = detail::parse_or_fail<Rules>(r, "rules", [&] { return parse_rules(detail::expect_key(r, "rules")); });
  art.board = static_cast<int>(detail::to_ll(r, "board", detail::expect_key(r, "board")));
  art.episodes = detail::to_ll(r, "episodes", detail::expect_key(r, "episodes"));
  const long long n = detail::to_ll(r, "entries", detail::expect_key(r, "entries"));
  if (r.next() != "sx,sy,ax,ay,q") r.fail("expected column header 'sx,sy,ax,ay,q'");
  const GameSpec spec{art.rules, art.board};
  for (long long i = 0; i < n; ++i) {
    std::string line = r.next();
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    if (cols.size() != 5) r.fail("expected 5 columns");
    const Position s{static_cast<int>(detail::to_ll(r, "sx", cols[0])),
                     static_cast<int>(detail::to_ll(r, "sy", cols[1]))};
    const Position a{static_cast<int>(detail::to_ll(r, "ax", cols[2])),
                     static_cast<int>(detail::to_ll(r, "ay", cols[3]))};
    if (!spec.on_board(s) || !spec.on_board(a)) r.fail("position off the declared board");
    art.q.set(s, a, detail::to_d(r, "q", cols[4]));
  }
  return art;
}

inline constexpr std::string_view kStrategistFormat = "hotcold-strategist v1";

inline void save_strategist(const StrategistState& st, std::ostream& os) {
  os << kStrategistFormat << '\n'
     << "influence " << detail::exact(st.influence) << '\n'
     << "board " << st.board << '\n'
     << "coord_scale " << detail::exact(st.coord_scale) << '\n'
     << "mode " << to_string(st.mode) << '\n'
     << "v_hot " << detail::exact(st.v_hot) << '\n'
     << "v_cold " << detail::exact(st.v_cold) << '\n';
  save_mlp(st.net, os);
}

inline StrategistState load_strategist(std::istream& is) {
  detail::LineReader r{is, "strategist", 0};
  detail::check_header(r, kStrategistFormat);
  StrategistState st;
  st.influence = detail::to_d(r, "influence", detail::expect_key(r, "influence"));
  st.board = static_cast<int>(detail::to_ll(r, "board", detail::expect_key(r, "board")));
  st.coord_scale = detail::to_d(r, "coord_scale", detail::expect_key(r, "coord_scale"));
  st.mode = detail::parse_or_fail<HeuristicMode>(r, "mode", [&] {
    return parse_heuristic_mode(detail::expect_key(r, "mode"));
  });
  st.v_hot = detail::to_d(r, "v_hot", detail::expect_key(r, "v_hot"));
  st.v_cold = detail::to_d(r, "v_cold", detail::expect_key(r, "v_cold"));
  try {
    st.net = load_mlp(is);
  } catch (const LoadError& e) {
    throw LoadError(std::string("strategist: after line ") + std::to_string(r.line_no) + ": " + e.what());
  }
  if (st.net.input_size() != 2 || st.net.output_size() != 1)
    throw LoadError("strategist: network must map 2 inputs to 1 output");
  return st;
}

inline constexpr std::string_view kDqnFormat = "hotcold-dqn v1";

inline void save_dqn(const DqnAgent& agent, std::ostream& os) {
  os << kDqnFormat << '\n' << "arch " << agent.arch.name << '\n' << "board " << agent.board << '\n';
  save_mlp(agent.net, os);
}

inline DqnAgent load_dqn(std::istream& is) {
  detail::LineReader r{is, "dqn", 0};
  detail::check_header(r, kDqnFormat);
  DqnAgent agent;
  agent.arch = detail::parse_or_fail<DqnArch>(r, "arch", [&] { return find_arch(detail::expect_key(r, "arch")); });
  agent.board = static_cast<int>(detail::to_ll(r, "board", detail::expect_key(r, "board")));
  try {
    agent.net = load_mlp(is);
  } catch (const LoadError& e) {
    throw LoadError(std::string("dqn: after line ") + std::to_string(r.line_no) + ": " + e.what());
  }
  if (dqn_dims(agent.arch, agent.board) != agent.net.dims())
    throw LoadError("dqn: layer sizes do not match architecture " + agent.arch.name);
  return agent;
}

inline constexpr std::string_view kOracleFormat = "# hotcold-oracle v1";

inline void save_oracle(const HotColdTable& table, std::ostream& os) {
  os << kOracleFormat << " rules=" << to_string(table.spec().rules)
     << " board=" << table.spec().board_size << '\n'
     << "x,y,label\n";
  const auto& spec = table.spec();
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    const Position p = spec.at(i);
    os << p.x << ',' << p.y << ',' << (table.is_cold(p) ? "cold" : "hot") << '\n';
  }
}

inline HotColdTable load_oracle(std::istream& is) {
  detail::LineReader r{is, "oracle", 0};
  const std::string header = r.next();
  std::string hash, magic, version, rules_kv, board_kv;
  std::istringstream hs(header);
  hs >> hash >> magic >> version >> rules_kv >> board_kv;
  if (hash + " " + magic + " " + version != kOracleFormat || rules_kv.rfind("rules=", 0) != 0 ||
      board_kv.rfind("board=", 0) != 0)
    r.fail("expected '" + std::string(kOracleFormat) + " rules=<r> board=<n>'");
  const Rules rules = detail::parse_or_fail<Rules>(r, "rules", [&] { return parse_rules(rules_kv.substr(6)); });
  const GameSpec spec{rules, static_cast<int>(detail::to_ll(r, "board", board_kv.substr(6)))};
  detail::parse_or_fail<int>(r, "board", [&] {
    spec.validate();
    return 0;
  });
  if (r.next() != "x,y,label") r.fail("expected column header 'x,y,label'");
  std::vector<std::uint8_t> cold(spec.cell_count(), 0);
  std::vector<std::uint8_t> seen(spec.cell_count(), 0);
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    std::stringstream ss(r.next());
    std::string xs, ys, label;
    if (!std::getline(ss, xs, ',') || !std::getline(ss, ys, ',') || !std::getline(ss, label))
      r.fail("expected x,y,label");
    const Position p{static_cast<int>(detail::to_ll(r, "x", xs)), static_cast<int>(detail::to_ll(r, "y", ys))};
    if (!spec.on_board(p)) r.fail("position off the declared board");
    if (label != "hot" && label != "cold") r.fail("label must be hot or cold");
    if (seen[spec.index(p)]++) r.fail("duplicate position " + to_string(p));
    cold[spec.index(p)] = label == "cold";
  }
  return HotColdTable(spec, std::move(cold));
}

// File helpers: open or throw with the path in the message.
inline std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw LoadError("cannot write " + p.string());
  return os;
}

inline std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw LoadError("cannot read " + p.string());
  return is;
}

template <typename T, typename Loader>
T load_file(const std::filesystem::path& p, Loader&& loader) {
  auto is = open_in(p);
  try {
    return loader(is);
  } catch (const LoadError& e) {
    throw LoadError(p.string() + ": " + e.what());
  }
}

// Metrics CSV. Wall time is left out so reruns are byte-identical; it goes
// to a separate timing file.
inline constexpr std::string_view kMetricsSchema = "# schema hotcold-metrics v1";

inline void write_metrics_header(std::ostream& os) {
  os << kMetricsSchema << '\n'
     << "arm,seed,outer_iteration,episodes_consumed,optimal_fraction,influence,strategist_loss,"
        "wins_player,wins_opponent\n";
}

inline void write_metrics_row(std::ostream& os, const std::string& arm, const MetricsRecord& m) {
  os << arm << ',' << m.seed << ',' << m.outer_iteration << ',' << m.episodes_consumed << ','
     << detail::exact(m.optimal_fraction) << ',' << detail::exact(m.influence) << ','
     << detail::exact(m.strategist_loss) << ',' << m.wins_player << ',' << m.wins_opponent << '\n';
}

inline void write_timing_header(std::ostream& os) { os << "arm,seed,outer_iteration,wall_seconds\n"; }

inline void write_timing_row(std::ostream& os, const std::string& arm, const MetricsRecord& m) {
  os << arm << ',' << m.seed << ',' << m.outer_iteration << ',' << std::setprecision(6) << m.wall_seconds
     << '\n';
}

inline nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& files) {
  nlohmann::json j;
  j["tool"] = "hotcold";
  j["version"] = kVersion;
  j["preset"] = to_string(cfg.preset);
  j["seeds"] = cfg.seeds;
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [k, v] : config_entries(cfg)) c[k] = v;
  j["config"] = c;
  j["config_text"] = to_config_text(cfg);
  j["files"] = files;
  j["rerun"] = "hotcold train --config config.txt";
  return j;
}

}  // namespace hotcold
