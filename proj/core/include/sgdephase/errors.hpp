#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgdephase {

enum class ErrorCode {
  kInvalidParameter,
  kDomain,
  kNumeric,
  kInvalidCorrelation,
  kCoverage,
  kInsufficientData,
  kApproximationDomain,
  kStepSize,
  kSpec,
  kConfig,
  kIo,
};

/// Stable, machine-readable name of an error code (e.g. "invalid-parameter").
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

[[noreturn]] void raise(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) raise(code, message);
}

}  // namespace detail
}  // namespace sgdephase
