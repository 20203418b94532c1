#pragma once

#include <stdexcept>
#include <string>

namespace cmx {

// Bad invocation or bad arguments (CLI exit code 1).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data or resources (CLI exit code 2).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cmx
