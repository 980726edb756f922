#pragma once

#include <stdexcept>
#include <string>

namespace hotcold {

// Precondition violated by the caller (off-board position, bad range, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Action selection was asked to pick from a terminal position.
class TerminalState : public std::logic_error {
 public:
  explicit TerminalState(const std::string& what) : std::logic_error(what) {}
};

// NaN/Inf produced by a training step. Aborts the run.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or version-mismatched artifact file.
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

// Experiment configuration failed validation.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace hotcold
