#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "hotcold/io.hpp"

using namespace hotcold;
namespace fs = std::filesystem;

namespace {

QTable trained_table() {
  const GameSpec spec{Rules::wythoff, 12};
  QTable q;
  std::mt19937_64 rng(1);
  for (long long n = 1; n <= 2000; ++n) play_episode(q, spec, StumblerConfig{}, BiasField{}, n, Opponent{}, rng, true);
  return q;
}

std::string drop_last_line(const std::string& text) {
  return text.substr(0, text.rfind('\n', text.size() - 2) + 1);
}

template <typename Load>
std::string load_error(const std::string& text, Load&& load) {
  std::istringstream in(text);
  try {
    load(in);
  } catch (const LoadError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(QTableIo, RoundTripExact) {
  const QTable q = trained_table();
  std::stringstream ss;
  save_qtable({Rules::wythoff, 12, 2000, q}, ss);
  const auto art = load_qtable(ss);
  EXPECT_TRUE(art.q == q);
  EXPECT_EQ(art.rules, Rules::wythoff);
  EXPECT_EQ(art.board, 12);
  EXPECT_EQ(art.episodes, 2000);
}

TEST(QTableIo, FrozenPlayIdenticalAfterReload) {
  const QTable q = trained_table();
  std::stringstream ss;
  save_qtable({Rules::wythoff, 12, 0, q}, ss);
  const QTable back = load_qtable(ss).q;
  const GameSpec spec{Rules::wythoff, 12};
  std::mt19937_64 r1(5), r2(5);
  for (std::size_t i = 1; i < spec.cell_count(); ++i) {
    const Position s = spec.at(i);
    const auto legal = legal_moves(spec, s);
    EXPECT_EQ(stumbler_greedy_move(q, s, legal, r1), stumbler_greedy_move(back, s, legal, r2));
  }
}

TEST(QTableIo, TruncatedNamesLine) {
  std::stringstream ss;
  save_qtable({Rules::wythoff, 12, 0, trained_table()}, ss);
  const std::string msg = load_error(drop_last_line(ss.str()), load_qtable);
  EXPECT_NE(msg.find("end of file at line"), std::string::npos) << msg;
}

TEST(QTableIo, BadValuesNameLine) {
  const std::string head = "hotcold-qtable v1\nrules wythoff\nboard 10\nepisodes 5\nentries 1\nsx,sy,ax,ay,q\n";
  EXPECT_NE(load_error(head + "3,3,0,0,zzz\n", load_qtable).find("line 7"), std::string::npos);
  EXPECT_NE(load_error(head + "30,3,0,0,0.5\n", load_qtable).find("off the declared board"), std::string::npos);
  EXPECT_NE(load_error(head + "3,3,0\n", load_qtable).find("5 columns"), std::string::npos);
  EXPECT_NE(load_error("hotcold-qtable v2\n", load_qtable).find("line 1"), std::string::npos);
  EXPECT_NE(load_error("hotcold-qtable v1\nrules chess\n", load_qtable).find("rules"), std::string::npos);
}

TEST(StrategistIo, RoundTripBehaviorIdentical) {
  StrategistConfig cfg;
  cfg.hidden1 = 20;
  cfg.hidden2 = 5;
  cfg.mode = HeuristicMode::value_regression;
  StrategistState st = make_strategist(cfg, 9);
  st.influence = 0.4;
  std::stringstream ss;
  save_strategist(st, ss);
  const auto back = load_strategist(ss);
  EXPECT_TRUE(back == st);
  const auto a = bias_field(st, {Rules::wythoff, 80}), b = bias_field(back, {Rules::wythoff, 80});
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
}

TEST(StrategistIo, TruncatedNetworkNamesLine) {
  std::stringstream ss;
  save_strategist(make_strategist(StrategistConfig{}, 1), ss);
  const std::string msg = load_error(drop_last_line(ss.str()), load_strategist);
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
  EXPECT_NE(msg.find("strategist"), std::string::npos) << msg;
}

TEST(DqnIo, RoundTripAndArchCheck) {
  const DqnAgent agent = make_dqn(find_arch("xy3"), 15, 2);
  std::stringstream ss;
  save_dqn(agent, ss);
  const std::string text = ss.str();
  std::istringstream in(text);
  const DqnAgent back = load_dqn(in);
  EXPECT_TRUE(back.net == agent.net);
  EXPECT_EQ(back.arch.name, "xy3");

  std::string wrong = text;
  wrong.replace(wrong.find("arch xy3"), 8, "arch xy1");
  EXPECT_NE(load_error(wrong, load_dqn).find("do not match"), std::string::npos);
  std::string unknown = text;
  unknown.replace(unknown.find("arch xy3"), 8, "arch zz9");
  EXPECT_NE(load_error(unknown, load_dqn).find("line 2"), std::string::npos);
}

TEST(OracleIo, RoundTrip) {
  for (Rules r : {Rules::wythoff, Rules::nim, Rules::euclid}) {
    const auto t = solve_retrograde({r, 23});
    std::stringstream ss;
    save_oracle(t, ss);
    EXPECT_TRUE(load_oracle(ss) == t);
  }
}

TEST(OracleIo, Errors) {
  const std::string head = "# hotcold-oracle v1 rules=nim board=2\nx,y,label\n";
  EXPECT_NE(load_error(head + "0,0,cold\n0,0,cold\n", load_oracle).find("duplicate"), std::string::npos);
  EXPECT_NE(load_error(head + "0,0,warm\n", load_oracle).find("line 3"), std::string::npos);
  EXPECT_NE(load_error(head + "0,0,cold\n", load_oracle).find("end of file at line 4"), std::string::npos);
  EXPECT_NE(load_error("x,y,label\n", load_oracle).find("line 1"), std::string::npos);
  EXPECT_NE(load_error("# hotcold-oracle v1 rules=nim board=1\nx,y,label\n", load_oracle).find("board"),
            std::string::npos);
}

TEST(Files, LoadFilePrefixesPath) {
  const fs::path dir = fs::temp_directory_path() / "hotcold_io_test";
  fs::remove_all(dir);
  {
    auto os = open_out(dir / "nested" / "q.txt");
    os << "garbage\n";
  }
  try {
    load_file<QTableArtifact>(dir / "nested" / "q.txt", [](std::istream& is) { return load_qtable(is); });
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("q.txt"), std::string::npos);
  }
  EXPECT_THROW(open_in(dir / "missing.txt"), LoadError);
  fs::remove_all(dir);
}

TEST(Metrics, HeaderAndRowsAreExact) {
  std::ostringstream os;
  write_metrics_header(os);
  MetricsRecord m;
  m.seed = 3;
  m.outer_iteration = 2;
  m.episodes_consumed = 500;
  m.optimal_fraction = 0.1;
  m.influence = 0.2;
  m.wins_player = 7;
  m.wins_opponent = 9;
  m.wall_seconds = 12.5;
  write_metrics_row(os, "arm", m);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kMetricsSchema);
  EXPECT_NE(text.find("arm,3,2,500,0.10000000000000001,0.20000000000000001,0,7,9\n"), std::string::npos);
  EXPECT_EQ(text.find("12.5"), std::string::npos);  // wall time stays out of the metrics file
}

TEST(Manifest, CarriesConfigAndRerun) {
  ExperimentConfig cfg;
  cfg.seeds = {4, 5};
  const auto j = make_manifest(cfg, {"metrics.csv"});
  EXPECT_EQ(j["tool"], "hotcold");
  EXPECT_EQ(j["seeds"].size(), 2u);
  EXPECT_EQ(j["config"]["alpha_s"], "0.40000000000000002");
  EXPECT_EQ(j["files"][0], "metrics.csv");
  std::istringstream in(j["config_text"].get<std::string>());
  ExperimentConfig back;
  apply_config_text(back, in);
  EXPECT_EQ(to_config_text(back), to_config_text(cfg));
}
