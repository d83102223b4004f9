#pragma once

#include <stdexcept>
#include <string>

namespace dixmier {

enum class ErrorCode {
  UnsupportedDimension,
  DivergentSum,
  EmptyResult,
  Validation,
  ToleranceNotMet,
  BandTooSmall,
  DimensionCap,
  Resolution,
  Infeasible,
  Io,
};

const char* to_string(ErrorCode code);

// Carries an optional numeric payload: achieved error bound, partial value, etc.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double value = 0.0)
      : std::runtime_error(message), code_(code), value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace dixmier
