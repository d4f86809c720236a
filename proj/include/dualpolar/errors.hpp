#pragma once

#include <stdexcept>
#include <string>

namespace dualpolar {

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Shapes of inputs do not fit together (length or ambient mismatch).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal invariant failed; indicates a bug or a corrupted model.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dualpolar
