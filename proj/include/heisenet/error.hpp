#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heisenet {

enum class ErrorKind {
  ParseError,
  ValidationError,
  SizeLimit,
  DimMismatch,
  BadSubset,
  WrongGateKind,
  NotReversible,
  NonUnitary,
  NotHermitian,
  NotInvolution,
  ToleranceViolation,
  CircuitMismatch,
  NonCommuting,
  ZeroWeightBranch,
  PreconditionFailed,
  BranchNotSharp,
  Internal,
};

std::string_view to_string(ErrorKind kind);

// Process exit status for an error kind:
// 1 parse/validation, 2 numerical tolerance, 3 physics precondition, 4 internal.
int exit_status(ErrorKind kind);

// Compact rendering of a residual or value for error messages (%.6g).
std::string format_residual(double v);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace heisenet
