// errors.hpp — error types shared across the library
#pragma once

#include <stdexcept>

namespace squeezedyn {

// Eigensolver non-convergence, tolerance violations, and similar failures
// that arise from the numerics rather than from bad input.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested accuracy cannot be met within the configured Fock-space cap.
struct TruncationError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace squeezedyn
