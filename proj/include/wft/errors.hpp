#pragma once

#include <stdexcept>
#include <string>

namespace wft {

enum class ErrorKind {
  NonHyperbolic,
  LeftOmega,
  NoConvergence,
  DegenerateBoundary,
  InvariantViolation,
  EventBudgetExceeded,
  TVTooLarge,
  DomainExceeded,
  NotNonCharacteristic,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorKind k);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw SolverError(kind, what); }

}  // namespace wft
