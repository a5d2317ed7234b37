#include "heisenet/error.hpp"

#include <cstdio>

namespace heisenet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::BadSubset: return "BadSubset";
    case ErrorKind::WrongGateKind: return "WrongGateKind";
    case ErrorKind::NotReversible: return "NotReversible";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotInvolution: return "NotInvolution";
    case ErrorKind::ToleranceViolation: return "ToleranceViolation";
    case ErrorKind::CircuitMismatch: return "CircuitMismatch";
    case ErrorKind::NonCommuting: return "NonCommuting";
    case ErrorKind::ZeroWeightBranch: return "ZeroWeightBranch";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::BranchNotSharp: return "BranchNotSharp";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

int exit_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::SizeLimit:
    case ErrorKind::DimMismatch:
    case ErrorKind::BadSubset:
    case ErrorKind::WrongGateKind:
    case ErrorKind::NotReversible:
      return 1;
    case ErrorKind::NonUnitary:
    case ErrorKind::NotHermitian:
    case ErrorKind::NotInvolution:
    case ErrorKind::ToleranceViolation:
    case ErrorKind::CircuitMismatch:
      return 2;
    case ErrorKind::NonCommuting:
    case ErrorKind::ZeroWeightBranch:
    case ErrorKind::PreconditionFailed:
    case ErrorKind::BranchNotSharp:
      return 3;
    case ErrorKind::Internal:
      return 4;
  }
  return 4;
}

std::string format_residual(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace heisenet
