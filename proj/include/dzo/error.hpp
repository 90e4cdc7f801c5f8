#pragma once

#include <stdexcept>
#include <string>

namespace dzo {

enum class ErrorKind {
  InvalidDimension,
  UnsupportedSmoothness,
  ConstructionFailed,
  Domain,
  Connectivity,
  Shape,
  Spectrum,
  Numerical,
  Parameter,
  UnavailableOptimum,
  SequenceExhausted,
  UndefinedSchedule,
  Divergence,
  Fit,
  Input,
  Config,
  Io,
};

/// Every library failure is reported as a dzo::Error carrying its kind, so
/// the CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::UnsupportedSmoothness: return "unsupported-smoothness";
    case ErrorKind::ConstructionFailed: return "construction-failed";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Connectivity: return "connectivity";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Spectrum: return "spectrum";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::UnavailableOptimum: return "unavailable-optimum";
    case ErrorKind::SequenceExhausted: return "sequence-exhausted";
    case ErrorKind::UndefinedSchedule: return "undefined-schedule";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Fit: return "fit";
    case ErrorKind::Input: return "input";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace dzo
