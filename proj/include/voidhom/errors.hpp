#pragma once

#include <stdexcept>

namespace voidhom {

// Numerical failure inside a solver (non-convergence, duality gap, ...).
// The CLI maps this to exit code 2.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed experiment configuration.  The CLI maps this to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace voidhom
