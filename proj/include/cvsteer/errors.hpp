#pragma once

#include <stdexcept>
#include <string>

namespace cvsteer {

// Invalid parameters or configuration supplied by the caller. CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Unreadable or unwritable files. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Moments or records that contradict each other, e.g. a negative variance.
// CLI exit code 4.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvsteer
