#pragma once

#include <stdexcept>
#include <string>

namespace hyperconn {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A root finder failed to converge for valid input. Treat as a bug.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed quantity left its region of validity (e.g. b_r <= 0).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound or formula whose hypotheses are not met at these parameters.
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact computation would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Statistical check requested on too few trials, or outside its informative band.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hyperconn
