#pragma once

#include <stdexcept>
#include <string>

namespace paracon {

/// Input rejected at construction or at an operation boundary (non-finite
/// entries, malformed parameters).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A documented precondition of an operation does not hold for the caller's
/// arguments (e.g. a supplied "fixed point" is not fixed).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace paracon
