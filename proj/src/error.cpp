#include "loopsoup/error.hpp"

namespace loopsoup {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kBadArgument: return "BadArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kNotIntegrable: return "NotIntegrable";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kBadSubset: return "BadSubset";
    case ErrorCode::kTrivialLoop: return "TrivialLoop";
    case ErrorCode::kNotACurrent: return "NotACurrent";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kBadSequences: return "BadSequences";
    case ErrorCode::kNotHermitianPD: return "NotHermitianPD";
    case ErrorCode::kNotSamplable: return "NotSamplable";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNegativePoint: return "NegativePoint";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

}  // namespace loopsoup
