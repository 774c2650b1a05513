#include "sgdephase/errors.hpp"

namespace sgdephase {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kNumeric:
      return "numeric";
    case ErrorCode::kInvalidCorrelation:
      return "invalid-correlation";
    case ErrorCode::kCoverage:
      return "coverage";
    case ErrorCode::kInsufficientData:
      return "insufficient-data";
    case ErrorCode::kApproximationDomain:
      return "approximation-domain";
    case ErrorCode::kStepSize:
      return "step-size";
    case ErrorCode::kSpec:
      return "spec";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

namespace detail {

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace detail
}  // namespace sgdephase
