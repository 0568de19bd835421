#include "polycontain/error.hpp"

namespace polycontain {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kUnsupportedConversion: return "unsupported-conversion";
    case ErrorCode::kSolverFailure: return "solver-failure";
    case ErrorCode::kResourceLimit: return "resource-limit";
    case ErrorCode::kInitializationFailure: return "initialization-failure";
    case ErrorCode::kInvalidCenter: return "invalid-center";
    case ErrorCode::kParseError: return "parse-error";
  }
  return "unknown";
}

}  // namespace polycontain
