#pragma once

#include <stdexcept>
#include <string>

namespace sensegate {

// Invalid configuration (bad parameter values, inconsistent grid, ...).
// CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem or file-content failure (missing file, malformed row, ...).
// CLI maps this to exit code 3.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sensegate
