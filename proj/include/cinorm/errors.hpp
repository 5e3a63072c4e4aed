#pragma once

#include <stdexcept>

namespace cinorm {

// Input or parameter outside the documented domain.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operand shapes or arities do not match.
struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

// Requested work or storage exceeds a configured cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition of an inequality step failed; no bound is emitted.
struct ConditionViolatedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cinorm
