#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gw {

// Machine-readable failure classes. The CLI maps each to a distinct exit code.
enum class ErrorCategory {
  invalid_argument,  // malformed input: dimension mismatch, bad enum value, ...
  out_of_range,      // action index outside its player's action set
  capacity,          // the requested computation exceeds a configured cell limit
  unsupported,       // valid input, but the requested mode does not apply
  contract,          // caller violated a precondition (e.g. weight below floor)
  config,            // experiment or game file failed validation
  io,                // file could not be read or written
};

std::string_view category_name(ErrorCategory category) noexcept;
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

inline void require(bool condition, ErrorCategory category, const std::string& message) {
  if (!condition) fail(category, message);
}

inline std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::out_of_range: return "out_of_range";
    case ErrorCategory::capacity: return "capacity";
    case ErrorCategory::unsupported: return "unsupported";
    case ErrorCategory::contract: return "contract";
    case ErrorCategory::config: return "config";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

inline int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::invalid_argument: return 3;
    case ErrorCategory::out_of_range: return 4;
    case ErrorCategory::capacity: return 5;
    case ErrorCategory::unsupported: return 6;
    case ErrorCategory::contract: return 7;
    case ErrorCategory::config: return 8;
    case ErrorCategory::io: return 9;
  }
  return 1;
}

}  // namespace gw
