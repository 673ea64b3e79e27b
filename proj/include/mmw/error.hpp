#pragma once

#include <stdexcept>
#include <string>

namespace mmw {

/// Raised when an input lies outside the domain of a model quantity.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a series, quadrature or root-finding step fails to reach its
/// tolerance. Carries the last partial estimate so callers can report it.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double partial_value, double error_estimate,
                 long iterations)
      : std::runtime_error(what + " (partial=" + std::to_string(partial_value) +
                           ", error=" + std::to_string(error_estimate) +
                           ", iterations=" + std::to_string(iterations) + ")"),
        partial_value_(partial_value),
        error_estimate_(error_estimate),
        iterations_(iterations) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double partial_value_;
  double error_estimate_;
  long iterations_;
};

}  // namespace mmw
