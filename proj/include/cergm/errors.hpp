#pragma once

#include <stdexcept>
#include <string>

namespace cergm {

// Argument outside the mathematical domain of an operation (bad epsilon,
// invalid subgraph, out-of-range block value, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact evaluation would exceed the configured work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No labelled graph on n vertices has an edge density inside the window.
class EmptyWindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cergm
