#pragma once

// Board coordinates and move rules for the three two-dimensional impartial
// games: Wythoff, Nim (no diagonal) and Euclid (multiples of the shorter
// distance). (0,0) is the top-left corner and the unique terminal position;
// every legal move strictly decreases x + y.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hotcold/errors.hpp"

namespace hotcold {

enum class Rules { wythoff, nim, euclid };

inline std::string_view to_string(Rules r) {
  switch (r) {
    case Rules::wythoff: return "wythoff";
    case Rules::nim: return "nim";
    case Rules::euclid: return "euclid";
  }
  return "?";
}

inline Rules parse_rules(std::string_view token) {
  if (token == "wythoff") return Rules::wythoff;
  if (token == "nim") return Rules::nim;
  if (token == "euclid") return Rules::euclid;
  throw InvalidInput("unknown rule set '" + std::string(token) + "' (expected wythoff|nim|euclid)");
}

struct Position {
  int x = 0;
  int y = 0;

  // Ordered by x, then y. This is the order legal_moves() returns.
  friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

inline std::string to_string(Position p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

struct Move {
  Position from;
  Position to;

  friend constexpr bool operator==(const Move&, const Move&) = default;
};

class IllegalMove : public std::invalid_argument {
 public:
  explicit IllegalMove(Move mv)
      : std::invalid_argument("illegal move " + to_string(mv.from) + "->" + to_string(mv.to)),
        move_(mv) {}

  Move move() const { return move_; }

 private:
  Move move_;
};

struct GameSpec {
  Rules rules = Rules::wythoff;
  int board_size = 15;

  void validate() const {
    if (board_size < 2) {
      throw InvalidInput("board_size must be >= 2, got " + std::to_string(board_size));
    }
    // Positions are packed into 16-bit fields in table keys.
    if (board_size > 65535) {
      throw InvalidInput("board_size must be <= 65535, got " + std::to_string(board_size));
    }
  }

  bool on_board(Position p) const {
    return p.x >= 0 && p.y >= 0 && p.x < board_size && p.y < board_size;
  }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(board_size) * static_cast<std::size_t>(board_size);
  }

  // Row-major index y*N + x.
  std::size_t index(Position p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(board_size) +
           static_cast<std::size_t>(p.x);
  }

  Position at(std::size_t index) const {
    const auto n = static_cast<std::size_t>(board_size);
    return {static_cast<int>(index % n), static_cast<int>(index / n)};
  }

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

constexpr bool is_terminal(Position p) { return p.x == 0 && p.y == 0; }

// Visits every legal target from `from` in unspecified order. The visitor
// returns false to stop early. Does not check that `from` is on the board.
template <typename Visitor>
void for_each_move(Rules rules, Position from, Visitor&& visit) {
  const int a = from.x;
  const int b = from.y;
  if (rules == Rules::euclid) {
    const int m = std::min(a, b);
    if (m == 0) {
      for (int i = 0; i < a; ++i)
        if (!visit(Position{i, b})) return;
      for (int j = 0; j < b; ++j)
        if (!visit(Position{a, j})) return;
      return;
    }
    for (int x = a - m; x >= 0; x -= m)
      if (!visit(Position{x, b})) return;
    for (int y = b - m; y >= 0; y -= m)
      if (!visit(Position{a, y})) return;
    return;
  }
  for (int i = 0; i < a; ++i)
    if (!visit(Position{i, b})) return;
  for (int j = 0; j < b; ++j)
    if (!visit(Position{a, j})) return;
  if (rules == Rules::wythoff) {
    const int m = std::min(a, b);
    for (int k = 1; k <= m; ++k)
      if (!visit(Position{a - k, b - k})) return;
  }
}

inline void check_on_board(const GameSpec& spec, Position p) {
  if (!spec.on_board(p)) {
    throw InvalidInput("position " + to_string(p) + " is off a " +
                       std::to_string(spec.board_size) + "x" + std::to_string(spec.board_size) +
                       " board");
  }
}

// Sorted legal targets; empty iff `pos` is terminal.
inline std::vector<Position> legal_moves(const GameSpec& spec, Position pos) {
  check_on_board(spec, pos);
  std::vector<Position> out;
  for_each_move(spec.rules, pos, [&](Position p) {
    out.push_back(p);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_legal(const GameSpec& spec, Move mv) {
  if (!spec.on_board(mv.from) || !spec.on_board(mv.to)) return false;
  bool found = false;
  for_each_move(spec.rules, mv.from, [&](Position p) {
    found = (p == mv.to);
    return !found;
  });
  return found;
}

inline Position apply_move(const GameSpec& spec, Move mv) {
  if (!is_legal(spec, mv)) throw IllegalMove(mv);
  return mv.to;
}

// Uniform over every board cell except the terminal corner.
template <typename Rng>
Position random_start(const GameSpec& spec, Rng& rng) {
  spec.validate();
  std::uniform_int_distribution<std::size_t> pick(1, spec.cell_count() - 1);
  return spec.at(pick(rng));
}

}  // namespace hotcold
