#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcdelay {

// Argument outside the mathematical domain of a function (maps to EDOM).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result not representable as a finite double.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Adaptive refinement or an iterative series stalled above its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact Mellin evaluation would need more composition terms than allowed.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(std::uint64_t terms, std::uint64_t budget)
      : std::runtime_error("composition count " + std::to_string(terms) +
                           " exceeds enumeration budget " +
                           std::to_string(budget)),
        terms_(terms),
        budget_(budget) {}
  std::uint64_t terms() const noexcept { return terms_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t terms_;
  std::uint64_t budget_;
};

// An alternating sum lost too many significant digits to be trusted.
class PrecisionLossError : public std::runtime_error {
 public:
  PrecisionLossError(const std::string& what, double digits)
      : std::runtime_error(what), digits_(digits) {}
  double significant_digits() const noexcept { return digits_; }

 private:
  double digits_;
};

// Kernel evaluated where M_alpha(1+s) M_g(1-Ns) >= 1.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration record (counts, horizons, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mcdelay
