#pragma once

#include <stdexcept>
#include <string>

namespace puea {

// Bad input data: unreadable/malformed files, degenerate training sets,
// solver failures. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or command usage. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace puea
