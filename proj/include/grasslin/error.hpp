#pragma once

#include <stdexcept>
#include <string>

namespace grasslin {

// Failure conditions surfaced by the library. Numerical conditions map to
// CLI exit status 3, usage/parse conditions to exit status 2.
enum class ErrorCode {
  NonFinite,
  NoConvergence,
  DimensionMismatch,
  ThetaOnSingularValue,
  BackwardErrorOnTheta,
  DegenerateColumn,
  ZeroRank,
  InconsistentSystem,
  RankMismatch,
  IncomparableDimensions,
  SingularAugmentedSystem,
  EmptyWindow,
  HypothesisViolated,
  ZeroRhs,
  NonlinearOperator,
  ShapeMismatch,
  LengthMismatch,
  ParseError,
  InconsistentRowLength,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const { return code_; }
  const char* name() const { return error_code_name(code_); }

  // True for conditions arising from bad invocations or unreadable inputs
  // rather than from the numerics themselves.
  bool is_usage() const {
    return code_ == ErrorCode::ParseError ||
           code_ == ErrorCode::InconsistentRowLength ||
           code_ == ErrorCode::LengthMismatch ||
           code_ == ErrorCode::InvalidArgument;
  }

 private:
  ErrorCode code_;
};

}  // namespace grasslin
