#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colombeau {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad order, epsilon <= 0, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Integrand or generalized function produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;

  // Returns a copy whose message is prefixed by `segment`, used to record the
  // path through an expression DAG at which the failure happened.
  [[nodiscard]] EvaluationError with_context(const std::string& segment) const {
    return EvaluationError(segment + ": " + what());
  }
};

// Adaptive quadrature hit its panel cap; carries the best estimate so far.
class ConvergenceError : public EvaluationError {
 public:
  ConvergenceError(const std::string& msg, double best_estimate, double error_estimate)
      : EvaluationError(msg), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }
  [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

// Mollifier construction failed (singular moment system, class check failed).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Classification was asked to run with bases that cannot support it.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace colombeau
