#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace riesz {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the supported range (kernel exponent, dimension,
// unregistered potential family, malformed config).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at a singular point, e.g. g(0) with s >= 0 or a force on a
// coincident pair.
class SingularError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed to reach its tolerance. Carries the residual
// history so callers can inspect how it stalled.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history = {})
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

// A quadrature or lattice-sum truncation could not certify its tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

}  // namespace riesz
