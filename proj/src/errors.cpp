#include "hydroelastic/errors.hpp"

namespace hydroelastic {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonZeroMean: return "NonZeroMean";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::ClosureViolated: return "ClosureViolated";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::FixedPointDiverged: return "FixedPointDiverged";
    case ErrorKind::StabilityViolated: return "StabilityViolated";
    case ErrorKind::ChordArcFailed: return "ChordArcFailed";
    case ErrorKind::InfeasibleFit: return "InfeasibleFit";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DuplicateZeroPair: return "DuplicateZeroPair";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace hydroelastic
