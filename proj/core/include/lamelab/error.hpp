#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lamelab {

using Complex = std::complex<double>;

enum class ErrorCode {
  kPoleProximity,
  kNoConvergence,
  kRamifiedPoint,
  kNoSignPattern,
  kDistinctnessViolation,
  kPoleAtInteger,
  kPartialEnumeration,
  kEvenTotalWeight,
  kPathTooClose,
  kStepUnderflow,
  kInconsistent,
  kNotDiagonalizable,
  kHalfPeriodInput,
  kCriticalPointOfF,
  kInvalidArgument,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lamelab
