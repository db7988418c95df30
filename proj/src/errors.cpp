#include "wft/errors.hpp"

namespace wft {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonHyperbolic: return "NonHyperbolic";
    case ErrorKind::LeftOmega: return "LeftOmega";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::EventBudgetExceeded: return "EventBudgetExceeded";
    case ErrorKind::TVTooLarge: return "TVTooLarge";
    case ErrorKind::DomainExceeded: return "DomainExceeded";
    case ErrorKind::NotNonCharacteristic: return "NotNonCharacteristic";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace wft
