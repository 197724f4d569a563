#pragma once

#include <stdexcept>
#include <string>

namespace deltalab {

struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Evaluation at a point where the object diverges (e.g. G_lambda at r = 0).
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

// Time step too large: norm drift after the allowed halvings, or a non-contracting Picard step.
struct StepSizeError : NumericalError {
  using NumericalError::NumericalError;
};

struct UnderResolvedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace deltalab
