#pragma once

#include <stdexcept>

namespace slaen {

// Invalid configuration or input file contents. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure (e.g. a covariance that is not positive semidefinite).
// CLI exit code 3, same as std::domain_error.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure. CLI exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slaen
