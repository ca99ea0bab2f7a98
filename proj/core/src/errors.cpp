#include "cgmt/errors.hpp"

namespace cgmt {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid_dimension";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::InsufficientSamples: return "insufficient_samples";
    case ErrorKind::InvalidArgument: return "invalid_arguments";
    case ErrorKind::InvalidTolerance: return "invalid_tolerance";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Regime: return "regime";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::ExperimentInvalid: return "experiment_invalid";
    case ErrorKind::InvalidConfig: return "invalid_config";
  }
  return "unknown";
}

}  // namespace cgmt
