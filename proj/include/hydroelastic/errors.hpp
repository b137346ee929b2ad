#pragma once

#include <stdexcept>
#include <string>

namespace hydroelastic {

enum class ErrorKind {
  InvalidArgument,
  NonZeroMean,
  DegenerateCurve,
  ClosureViolated,
  NotConverged,
  FixedPointDiverged,
  StabilityViolated,
  ChordArcFailed,
  InfeasibleFit,
  GridMismatch,
  DuplicateZeroPair,
  InsufficientData,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable failure kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hydroelastic
