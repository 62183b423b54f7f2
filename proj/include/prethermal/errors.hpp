#pragma once

#include <stdexcept>
#include <string>

namespace prethermal {

/// Inputs whose shapes disagree (basis dimension vs vector length, ...).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The plane-wave basis is too small for the requested band.
class TruncationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integrator failed its step-doubling check.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration. Carries a "line:col" position
/// when the problem can be traced to a config document.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string where = {})
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace prethermal
