#include "heisenet/matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "heisenet/error.hpp"
#include "heisenet/kernels.hpp"

namespace heisenet {

namespace {

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimMismatch, std::string(what) + ": " + std::to_string(a.dim()) +
                                            " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

bool is_power_of_two(std::size_t v) noexcept { return v != 0 && (v & (v - 1)) == 0; }

CMatrix::CMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (!is_power_of_two(dim)) {
    throw Error(ErrorKind::DimMismatch, "matrix dimension " + std::to_string(dim) +
                                            " is not a power of two");
  }
}

CMatrix::CMatrix(std::size_t dim, std::vector<cplx> entries) : CMatrix(dim) {
  if (entries.size() != dim * dim) {
    throw Error(ErrorKind::DimMismatch, "expected " + std::to_string(dim * dim) +
                                            " entries, got " + std::to_string(entries.size()));
  }
  entries_ = std::move(entries);
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : CMatrix(rows.size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_) throw Error(ErrorKind::DimMismatch, "ragged matrix literal");
    std::copy(row.begin(), row.end(), entries_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
    ++r;
  }
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
  CMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_dim(*this, other, "matrix sum");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_dim(*this, other, "matrix difference");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx scalar) {
  for (auto& e : entries_) e *= scalar;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "matrix product");
  CMatrix c(a.dim());
  kernels::matmul(a.dim(), a.data(), b.data(), c.data());
  return c;
}

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
  if (!is_power_of_two(amps_.size())) {
    throw Error(ErrorKind::DimMismatch, "state dimension " + std::to_string(amps_.size()) +
                                            " is not a power of two");
  }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  std::vector<cplx> amps(dim);
  if (index >= dim) throw Error(ErrorKind::DimMismatch, "basis index out of range");
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector StateVector::normalized() const {
  const double n = norm();
  StateVector out = *this;
  for (auto& a : out.amps_) a /= n;
  return out;
}

namespace pauli {

const CMatrix& identity2() {
  static const CMatrix m = CMatrix::identity(2);
  return m;
}
const CMatrix& x() {
  static const CMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
const CMatrix& y() {
  static const CMatrix m{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}};
  return m;
}
const CMatrix& z() {
  static const CMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

}  // namespace pauli

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.dim() * b.dim());
  kernels::kron(a.dim(), a.data(), b.dim(), b.data(), out.data());
  return out;
}

CMatrix conjugate_prechecked(const CMatrix& u, const CMatrix& a) {
  require_same_dim(u, a, "conjugate");
  const std::size_t d = u.dim();
  CMatrix au(d);
  kernels::matmul(d, a.data(), u.data(), au.data());
  CMatrix out(d);
  kernels::adjoint_matmul(d, u.data(), au.data(), out.data());
  return out;
}

CMatrix conjugate(const CMatrix& u, const CMatrix& a, const Tolerances& tol) {
  require_same_dim(u, a, "conjugate");
  const double r = unitarity_residual(u);
  if (r > tol.unitary) {
    throw Error(ErrorKind::NonUnitary, "||u^H u - 1|| = " + format_residual(r));
  }
  return conjugate_prechecked(u, a);
}

SpectralDecomposition spectral(const CMatrix& h, const Tolerances& tol) {
  const double herm = hermiticity_residual(h);
  if (herm > tol.hermitian) {
    throw Error(ErrorKind::NotHermitian, "||h - h^H|| = " + format_residual(herm));
  }
  const auto d = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      m(i, j) = 0.5 * (h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                       std::conj(h(static_cast<std::size_t>(j), static_cast<std::size_t>(i))));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Internal, "eigen solver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXcd& vectors = solver.eigenvectors();

  SpectralDecomposition out;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && values(end) - values(end - 1) <= tol.eigengap) ++end;
    const Eigen::MatrixXcd block = vectors.middleCols(start, end - start);
    const Eigen::MatrixXcd proj = block * block.adjoint();
    CMatrix p(h.dim());
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        p(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = proj(i, j);
    out.eigenvalues.push_back(values.segment(start, end - start).mean());
    out.projectors.push_back(std::move(p));
    start = end;
  }
  return out;
}

CMatrix pauli_projector(const CMatrix& q, int sign, const Tolerances& tol) {
  if (sign != 1 && sign != -1) {
    throw Error(ErrorKind::ValidationError, "projector sign must be +1 or -1");
  }
  const double r = involution_residual(q);
  if (r > tol.general) {
    throw Error(ErrorKind::NotInvolution, "||q^2 - 1|| = " + format_residual(r));
  }
  CMatrix p = CMatrix::identity(q.dim());
  if (sign > 0) {
    p += q;
  } else {
    p -= q;
  }
  return p * 0.5;
}

double distance(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "distance");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double hermiticity_residual(const CMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

double unitarity_residual(const CMatrix& u) {
  CMatrix uhu(u.dim());
  kernels::adjoint_matmul(u.dim(), u.data(), u.data(), uhu.data());
  return distance(uhu, CMatrix::identity(u.dim()));
}

double involution_residual(const CMatrix& q) {
  return distance(q * q, CMatrix::identity(q.dim()));
}

bool is_hermitian(const CMatrix& a, double tol) { return hermiticity_residual(a) <= tol; }

StateVector operator*(const CMatrix& a, const StateVector& v) {
  if (a.dim() != v.dim()) throw Error(ErrorKind::DimMismatch, "matrix-vector product");
  std::vector<cplx> y(v.dim());
  kernels::matvec(a.dim(), a.data(), v.data(), y);
  return StateVector(std::move(y));
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "inner product");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

cplx expectation_value(const StateVector& psi, const CMatrix& a) {
  return inner(psi, a * psi);
}

cplx bilinear(const StateVector& psi, const CMatrix& a, const CMatrix& b) {
  // <psi|AB|psi> = <A^H psi | B psi>
  const StateVector bpsi = b * psi;
  return inner(a.adjoint() * psi, bpsi);
}

}  // namespace heisenet
