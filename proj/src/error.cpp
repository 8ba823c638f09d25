#include "fnls/error.hpp"

namespace fnls {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonFiniteField: return "NonFiniteField";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::ScalePrecisionLoss: return "ScalePrecisionLoss";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::DegenerateInit: return "DegenerateInit";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::CutoffTooLarge: return "CutoffTooLarge";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace fnls
