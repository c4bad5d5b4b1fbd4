#include "spoofwatch/error.hpp"

namespace spoofwatch {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownOrderId: return "UnknownOrderId";
    case ErrorCode::DuplicateOrderId: return "DuplicateOrderId";
    case ErrorCode::NegativeResidual: return "NegativeResidual";
    case ErrorCode::OutOfOrderTimestamp: return "OutOfOrderTimestamp";
    case ErrorCode::CrossedBook: return "CrossedBook";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::InsufficientLiquidity: return "InsufficientLiquidity";
    case ErrorCode::EmptyBook: return "EmptyBook";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SparseBucket: return "SparseBucket";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::WindowUnderflow: return "WindowUnderflow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace spoofwatch
