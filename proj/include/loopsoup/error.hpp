#pragma once

#include <stdexcept>
#include <string>

namespace loopsoup {

enum class ErrorCode {
  kBadArgument = 1,
  kParse,
  kNotIntegrable,
  kSingularMatrix,
  kBadSubset,
  kTrivialLoop,
  kNotACurrent,
  kBudgetExceeded,
  kBadSequences,
  kNotHermitianPD,
  kNotSamplable,
  kTooLarge,
  kNegativePoint,
  kInternal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace loopsoup
