#pragma once

// Frozen agents and head-to-head evaluation.

#include <algorithm>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hotcold/oracle.hpp"
#include "hotcold/strategist.hpp"
#include "hotcold/stumbler.hpp"

namespace hotcold {

using Rng = std::mt19937_64;

// A frozen move chooser. `choose` receives the sorted legal moves and may in
// principle return anything; evaluate_matchup treats an illegal answer as a
// forfeit.
struct Agent {
  std::string name;
  std::function<Position(const GameSpec&, Position, const std::vector<Position>&, Rng&)> choose;
};

inline Agent random_agent() {
  return {"random", [](const GameSpec&, Position, const std::vector<Position>& legal, Rng& rng) {
            return legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
          }};
}

// Moves to a cold target when one exists, otherwise uniformly at random. The
// table is solved lazily for each board size it is asked about.
inline Agent oracle_agent() {
  auto cache = std::make_shared<std::vector<HotColdTable>>();
  return {"oracle", [cache](const GameSpec& spec, Position, const std::vector<Position>& legal,
                            Rng& rng) {
            const HotColdTable* table = nullptr;
            for (const auto& t : *cache)
              if (t.spec() == spec) table = &t;
            if (!table) {
              cache->push_back(solve_retrograde(spec));
              table = &cache->back();
            }
            std::vector<Position> cold;
            for (Position t : legal)
              if (table->is_cold(t)) cold.push_back(t);
            const auto& pool = cold.empty() ? legal : cold;
            return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
          }};
}

inline Agent stumbler_agent(QTable q) {
  auto table = std::make_shared<QTable>(std::move(q));
  return {"stumbler", [table](const GameSpec&, Position s, const std::vector<Position>& legal,
                              Rng& rng) { return stumbler_greedy_move(*table, s, legal, rng); }};
}

// Greedy on B alone; the field is recomputed once per board size.
inline Agent strategist_agent(StrategistState state) {
  auto st = std::make_shared<StrategistState>(std::move(state));
  auto field = std::make_shared<BiasField>();
  return {"strategist", [st, field](const GameSpec& spec, Position, const std::vector<Position>& legal,
                                    Rng& rng) {
            if (field->size() != spec.board_size) *field = bias_field(*st, spec);
            return strategist_move(*field, legal, rng);
          }};
}

struct GameOutcome {
  Position start;
  bool a_first = true;
  bool a_won = false;
  bool forfeit = false;
};

struct MatchResult {
  std::string agent_a;
  std::string agent_b;
  int board_size = 0;
  int games = 0;
  int a_wins = 0;
  int illegal_a = 0;
  int illegal_b = 0;
  std::vector<GameOutcome> outcomes;

  double a_win_fraction() const { return games == 0 ? 0.0 : static_cast<double>(a_wins) / games; }
};

// Agent a moves first in even-numbered games. Whoever lands on (0,0) wins; an
// illegal move loses on the spot.
inline MatchResult evaluate_matchup(const Agent& a, const Agent& b, const GameSpec& spec, int games,
                                    Rng& rng) {
  spec.validate();
  if (games < 0) throw InvalidInput("evaluate_matchup: games must be >= 0");
  MatchResult result{a.name, b.name, spec.board_size, games, 0, 0, 0, {}};
  result.outcomes.reserve(static_cast<std::size_t>(games));
  for (int g = 0; g < games; ++g) {
    GameOutcome out;
    out.start = random_start(spec, rng);
    out.a_first = g % 2 == 0;
    Position s = out.start;
    bool a_to_move = out.a_first;
    while (true) {
      const auto legal = legal_moves(spec, s);
      const Agent& mover = a_to_move ? a : b;
      const Position t = mover.choose(spec, s, legal, rng);
      if (!std::binary_search(legal.begin(), legal.end(), t)) {
        std::clog << "matchup: " << mover.name << " played illegal " << to_string(s) << "->"
                  << to_string(t) << ", game forfeited\n";
        (a_to_move ? result.illegal_a : result.illegal_b) += 1;
        out.forfeit = true;
        out.a_won = !a_to_move;
        break;
      }
      if (is_terminal(t)) {
        out.a_won = a_to_move;
        break;
      }
      s = t;
      a_to_move = !a_to_move;
    }
    if (out.a_won) ++result.a_wins;
    result.outcomes.push_back(out);
  }
  return result;
}

}  // namespace hotcold
