#pragma once

// Exact hot/cold labelling by retrograde analysis, the closed form for
// Wythoff's game, and scoring of move-choosing policies against it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <span>
#include <vector>

#include "hotcold/game.hpp"

namespace hotcold {

enum class Label : std::uint8_t { hot, cold };

class HotColdTable {
 public:
  HotColdTable(GameSpec spec, std::vector<std::uint8_t> cold)
      : spec_(spec), cold_(std::move(cold)) {}

  const GameSpec& spec() const { return spec_; }

  bool is_cold(Position p) const { return cold_[spec_.index(p)] != 0; }
  Label label(Position p) const { return is_cold(p) ? Label::cold : Label::hot; }

  // Row-major (y outer, x inner).
  std::vector<Position> positions(Label which) const {
    std::vector<Position> out;
    for (std::size_t i = 0; i < cold_.size(); ++i)
      if ((cold_[i] != 0) == (which == Label::cold)) out.push_back(spec_.at(i));
    return out;
  }

  friend bool operator==(const HotColdTable&, const HotColdTable&) = default;

 private:
  GameSpec spec_;
  std::vector<std::uint8_t> cold_;
};

// Row-major order is a valid topological order: every move lands on a
// smaller row, or on the same row further left.
inline HotColdTable solve_retrograde(const GameSpec& spec) {
  spec.validate();
  const int n = spec.board_size;
  std::vector<std::uint8_t> cold(spec.cell_count(), 0);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      bool reaches_cold = false;
      for_each_move(spec.rules, Position{x, y}, [&](Position t) {
        reaches_cold = cold[spec.index(t)] != 0;
        return !reaches_cold;
      });
      cold[spec.index(Position{x, y})] = reaches_cold ? 0 : 1;
    }
  }
  return HotColdTable(spec, std::move(cold));
}

namespace detail {

inline std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace detail

// floor(d * phi) in exact integer arithmetic. Since sqrt(5 d^2) is irrational
// for d > 0, floor((d + sqrt(5 d^2)) / 2) == (d + isqrt(5 d^2)) / 2. 5 d^2 must
// fit in 64 bits, so d < 1.9e9.
inline std::int64_t floor_times_phi(std::int64_t d) {
  if (d < 0) throw InvalidInput("floor_times_phi expects d >= 0");
  if (d > 1'900'000'000) throw InvalidInput("floor_times_phi: d too large for exact test");
  const auto ud = static_cast<std::uint64_t>(d);
  return static_cast<std::int64_t>((ud + detail::isqrt(5 * ud * ud)) / 2);
}

// Cold iff the sorted pair (m, n) is a Beatty pair: m == floor((n - m) * phi).
inline bool wythoff_cold_closed_form(Position pos) {
  const std::int64_t m = std::min(pos.x, pos.y);
  const std::int64_t n = std::max(pos.x, pos.y);
  return m == floor_times_phi(n - m);
}

inline std::vector<Position> optimal_targets(const HotColdTable& table, Position pos) {
  std::vector<Position> out;
  for (Position t : legal_moves(table.spec(), pos))
    if (table.is_cold(t)) out.push_back(t);
  return out;
}

struct PolicyScore {
  double optimal_fraction = 0.0;
  std::size_t states_scored = 0;
  std::size_t illegal_choices = 0;
};

using MoveChooser = std::function<Position(Position)>;

// States from which no cold move exists are scored too (always non-optimal);
// callers are expected to pass Hot states only.
inline PolicyScore score_policy(const HotColdTable& table, const MoveChooser& choose,
                                std::span<const Position> states) {
  PolicyScore score;
  std::size_t optimal = 0;
  for (Position s : states) {
    ++score.states_scored;
    const Position t = choose(s);
    if (!is_legal(table.spec(), Move{s, t})) {
      ++score.illegal_choices;
      std::clog << "score_policy: illegal choice " << to_string(s) << "->" << to_string(t)
                << " scored as non-optimal\n";
      continue;
    }
    if (table.is_cold(t)) ++optimal;
  }
  if (score.states_scored > 0)
    score.optimal_fraction = static_cast<double>(optimal) / static_cast<double>(score.states_scored);
  return score;
}

// Expected optimal_fraction of a uniformly random mover over all Hot states:
// mean of (#cold targets / #legal targets).
inline double random_baseline(const HotColdTable& table) {
  const auto hot = table.positions(Label::hot);
  if (hot.empty()) return 0.0;
  double total = 0.0;
  for (Position s : hot) {
    std::size_t legal = 0;
    std::size_t good = 0;
    for_each_move(table.spec().rules, s, [&](Position t) {
      ++legal;
      if (table.is_cold(t)) ++good;
      return true;
    });
    total += static_cast<double>(good) / static_cast<double>(legal);
  }
  return total / static_cast<double>(hot.size());
}

}  // namespace hotcold
