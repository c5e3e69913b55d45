#pragma once

#include <stdexcept>
#include <string>

namespace vkd {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or mutually inconsistent user-supplied parameters.
struct ConfigError : Error {
  using Error::Error;
};

// Non-finite or otherwise unusable field data.
struct DataError : Error {
  using Error::Error;
};

// Mismatched grids or array shapes.
struct ShapeError : Error {
  using Error::Error;
};

// History / time bookkeeping used out of order.
struct SequencingError : Error {
  using Error::Error;
};

// An iterative solver failed to reach its certified tolerance.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, int iterations, double residual)
      : Error(msg), iterations(iterations), residual(residual) {}
  int iterations = 0;
  double residual = 0.0;
};

// Parameter values at which the model itself degenerates (e.g. flow speed 1).
struct SingularError : Error {
  using Error::Error;
};

}  // namespace vkd
