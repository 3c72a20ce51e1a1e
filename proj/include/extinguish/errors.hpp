#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace extinguish {

/// Violated precondition on a mathematical argument (m outside (0,1), a outside the cone, bad grid).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested grid exceeds the configured point budget.
class MemoryBudgetError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Two fields living on different grids were combined.
class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A norm blew past the stability guard or turned non-finite during time stepping.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fit or bound was asked for on too few usable records.
class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration text failed to parse or validate. Carries every violation found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += '\n';
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace extinguish
