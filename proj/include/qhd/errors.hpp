#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhd {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Objective or gradient produced a non-finite value.
struct EvaluationError : std::runtime_error {
  EvaluationError(const std::string& what, std::size_t where)
      : std::runtime_error(what), index(where) {}
  std::size_t index;
};

struct NumericalBlowup : std::runtime_error {
  NumericalBlowup(const std::string& what, long step_index)
      : std::runtime_error(what), step(step_index) {}
  long step;
};

struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  ValidationError(const std::string& what, double first_bad_time)
      : std::runtime_error(what), time(first_bad_time) {}
  double time;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, std::vector<double> res)
      : std::runtime_error(what), residuals(std::move(res)) {}
  std::vector<double> residuals;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnsupportedDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace qhd
