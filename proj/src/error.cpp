#include "timtin/error.hpp"

namespace timtin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NegativeExponent: return "negative-exponent";
    case ErrorCode::NonPositiveDirectLink: return "non-positive-direct-link";
    case ErrorCode::InvalidRange: return "invalid-range";
    case ErrorCode::TooFewUsers: return "too-few-users";
    case ErrorCode::TolerancePositive: return "tolerance-nonpositive";
    case ErrorCode::InvalidStreamCount: return "invalid-stream-count";
    case ErrorCode::MissingPhases: return "missing-phases";
    case ErrorCode::InvalidPower: return "invalid-power";
    case ErrorCode::NegativeTarget: return "negative-target";
    case ErrorCode::UnsupportedTopology: return "unsupported-topology";
    case ErrorCode::IncompatibleDecomposition: return "incompatible-decomposition";
    case ErrorCode::ThresholdAboveHalf: return "threshold-above-half";
    case ErrorCode::EmptySeedList: return "empty-seed-list";
    case ErrorCode::ConfigInvalid: return "config-invalid";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::FileIo: return "file-io";
  }
  return "unknown";
}

}  // namespace timtin
