#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace timtin {

enum class ErrorCode {
  DimensionMismatch,
  NegativeExponent,
  NonPositiveDirectLink,
  InvalidRange,
  TooFewUsers,
  TolerancePositive,
  InvalidStreamCount,
  MissingPhases,
  InvalidPower,
  NegativeTarget,
  UnsupportedTopology,
  IncompatibleDecomposition,
  ThresholdAboveHalf,
  EmptySeedList,
  ConfigInvalid,
  ParseError,
  FileIo,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace timtin
