#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepgram {

// Every failure raised by the library carries one of these codes. The CLI maps
// input-class codes to exit status 1 and numerical-class codes to exit status 2.
enum class ErrorCode {
  // input / validation
  OutOfRange,
  SizeMismatch,
  NotHermitian,
  NotPSD,
  TraceDeviation,
  ParseError,
  LimitingCase,
  UnsupportedDimension,
  DecompositionMismatch,
  NotIsometry,
  GramMismatch,
  DependentBase,
  CertificateInvalid,
  NotPPT,
  NotSelfPT,
  RankMismatch,
  NotInRange,
  UnsupportedRankPattern,
  // numerical
  EigensolverFailure,
  NoSolution,
  ZeroDiagonal,
  SingularD,
  SingularC,
  JointDiagonalizationFailed,
  DegenerateSystem,
  NoneFound,
};

std::string_view to_string(ErrorCode code);

// True for codes that describe bad input rather than a numerical breakdown.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  // The offending quantity when there is one (min eigenvalue, residual, ...).
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace sepgram
