#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heisenet {

/// Numerical thresholds shared by every module. All are absolute and compared
/// against max-entry norms or scalar residuals.
struct Tolerances {
  double hermitian = 1e-10;
  double unitary = 1e-10;
  double general = 1e-10;     // idempotence, involution, reconstruction
  double eigengap = 1e-8;     // eigenvalue clustering in spectral()
  double sharp = 1e-9;        // |<A>^2 - <A^2>|
  double entangle = 1e-9;     // |<AB> - <A><B>|
  double commute = 1e-9;      // ||[A, B]||
  double weight = 1e-12;      // zero-amplitude branch detection
  double norm = 1e-10;        // | ||psi|| - 1 |
  double oracle = 1e-9;       // Heisenberg vs Schroedinger expectations

  /// Sets a tolerance by its report name. Throws ValidationError for unknown
  /// names or non-positive values.
  void set(std::string_view name, double value);

  /// (name, value) pairs in a fixed order, for report echoes.
  std::vector<std::pair<std::string, double>> entries() const;
};

}  // namespace heisenet
