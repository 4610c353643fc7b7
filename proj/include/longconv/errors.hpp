#pragma once

#include <stdexcept>
#include <string>

namespace longconv {

// Operand shapes or sizes do not line up.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A transform plan cannot be built for the requested size (caller should pad).
struct PlanError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A linear solve exceeded its conditioning threshold.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File parse / serialization failure; message names the byte offset.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace longconv
