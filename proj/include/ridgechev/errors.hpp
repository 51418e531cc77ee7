#pragma once

#include <stdexcept>

namespace ridgechev {

// Malformed user input: files, flags, index ranges, cap violations.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A certificate, path, or dual witness fails its contract.
struct verification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal invariant broke. Indicates a bug, not bad input.
struct internal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace ridgechev
