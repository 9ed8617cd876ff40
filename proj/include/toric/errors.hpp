#pragma once

#include <stdexcept>

namespace toric {

/// Input violates an operation's precondition (bad shape, unsupported case,
/// failed structural requirement).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Iterative numerics (Newton projection, frame construction) did not reach
/// the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toric
