#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spoofwatch {

enum class ErrorCode {
  UnknownOrderId,
  DuplicateOrderId,
  NegativeResidual,
  OutOfOrderTimestamp,
  CrossedBook,
  EmptySide,
  InsufficientLiquidity,
  EmptyBook,
  EmptyWindow,
  InsufficientSamples,
  DegenerateSample,
  NonConvergence,
  SparseBucket,
  SingularCovariance,
  EmptySample,
  WindowUnderflow,
  InvalidArgument,
  ParseError,
  ConfigError,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

// Every module error carries a machine-readable code; the CLI surfaces it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spoofwatch
