#pragma once

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "heisenet/matrix.hpp"

namespace heisenet::test {

inline ::testing::AssertionResult MatrixNear(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.dim() != b.dim()) {
    return ::testing::AssertionFailure() << "dims " << a.dim() << " vs " << b.dim();
  }
  const double d = distance(a, b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "max entry distance " << d << " > " << tol;
}

inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(dim);
  for (auto& e : m.data()) e = cplx(n(rng), n(rng));
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  const CMatrix m = random_matrix(rng, dim);
  return (m + m.adjoint()) * 0.5;
}

// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline CMatrix random_unitary(std::mt19937_64& rng, std::size_t dim) {
  const CMatrix m = random_matrix(rng, dim);
  Eigen::MatrixXcd e(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) e(i, j) = m(i, j);
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(e).householderQ();
  CMatrix u(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) u(i, j) = q(i, j);
  return u;
}

}  // namespace heisenet::test
