#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kelab {

// Argument outside the domain of a model, map or special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A finite-difference stencil would leave the region where the field is defined.
class StencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky pivot failure on a matrix that was required to be positive definite.
class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares fit with too few samples for the requested model.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace kelab
