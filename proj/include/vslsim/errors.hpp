#pragma once

#include <stdexcept>

namespace vsl {

// Invalid or inconsistent scenario/model configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A runtime invariant (conservation, bounds, step ordering) was violated.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vsl
