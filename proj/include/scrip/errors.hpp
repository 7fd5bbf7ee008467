#pragma once

#include <stdexcept>
#include <string>

namespace scrip {

/// Invalid parameter or configuration value. CLI maps this to exit code 1.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested work exceeds the configured resource budget. Exit code 2.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant failed (non-threshold policy, asymmetric matrix,
/// non-convergent iteration, ...). Exit code 3.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace scrip
