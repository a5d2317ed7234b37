#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "heisenet/tolerances.hpp"

namespace heisenet {

using cplx = std::complex<double>;

/// Square dense complex matrix with power-of-two dimension, row-major storage.
/// Values are immutable in practice: every operation returns a new matrix.
class CMatrix {
 public:
  CMatrix() = default;
  /// Zero matrix. Throws DimMismatch unless dim is a power of two.
  explicit CMatrix(std::size_t dim);
  CMatrix(std::size_t dim, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t dim);
  static CMatrix diagonal(std::span<const cplx> diag);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  const cplx& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  cplx& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

  std::span<const cplx> data() const noexcept { return entries_; }
  std::span<cplx> data() noexcept { return entries_; }

  CMatrix adjoint() const;
  cplx trace() const;
  /// Largest entry modulus.
  double max_abs() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx scalar);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator-(CMatrix a) { return a *= -1.0; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> entries_;
};

/// Amplitude vector of dimension 2^k.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<cplx> amplitudes);

  /// Standard basis vector e_index.
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  std::span<const cplx> data() const noexcept { return amps_; }
  std::span<cplx> data() noexcept { return amps_; }

  double norm() const;
  StateVector normalized() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<cplx> amps_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  std::vector<CMatrix> projectors;  // projectors[i] spans the eigenvalues[i] eigenspace
};

namespace pauli {
const CMatrix& identity2();
const CMatrix& x();
const CMatrix& y();
const CMatrix& z();
}  // namespace pauli

bool is_power_of_two(std::size_t v) noexcept;

/// Kronecker product, `a` is the more significant (left) factor.
CMatrix tensor(const CMatrix& a, const CMatrix& b);

/// u^H a u. Throws NonUnitary if ||u^H u - 1|| > tol.unitary.
CMatrix conjugate(const CMatrix& u, const CMatrix& a, const Tolerances& tol = {});
/// u^H a u without the unitarity check, for callers that validated u once.
CMatrix conjugate_prechecked(const CMatrix& u, const CMatrix& a);

/// Eigenvalues clustered by single linkage with gap tol.eigengap, with the
/// orthogonal projector onto each cluster's eigenspace. Throws NotHermitian.
SpectralDecomposition spectral(const CMatrix& h, const Tolerances& tol = {});

/// (1 + sign*q)/2 for an involution q. Throws NotInvolution.
CMatrix pauli_projector(const CMatrix& q, int sign, const Tolerances& tol = {});

/// max |a - b| entrywise. Throws DimMismatch.
double distance(const CMatrix& a, const CMatrix& b);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
double hermiticity_residual(const CMatrix& a);
double unitarity_residual(const CMatrix& u);
/// ||q^2 - 1||
double involution_residual(const CMatrix& q);
bool is_hermitian(const CMatrix& a, double tol);

StateVector operator*(const CMatrix& a, const StateVector& v);
cplx inner(const StateVector& a, const StateVector& b);  // <a|b>
/// <psi| A |psi>
cplx expectation_value(const StateVector& psi, const CMatrix& a);
/// <psi| A B |psi>, computed without forming A B.
cplx bilinear(const StateVector& psi, const CMatrix& a, const CMatrix& b);

}  // namespace heisenet
