#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "heisenet/kernels.hpp"
#include "test_support.hpp"

namespace heisenet {
namespace {

using kernels::cplx;

std::vector<cplx> random_entries(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& e : v) e = cplx(d(rng), d(rng));
  return v;
}

// Textbook triple loop with std::complex arithmetic.
std::vector<cplx> naive_matmul(std::size_t dim, const std::vector<cplx>& a,
                               const std::vector<cplx>& b) {
  std::vector<cplx> c(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) c[i * dim + j] += a[i * dim + k] * b[k * dim + j];
  return c;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

class KernelSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelSizes, MatmulMatchesNaive) {
  const std::size_t dim = GetParam();
  std::mt19937_64 rng(dim);
  const auto a = random_entries(rng, dim * dim);
  const auto b = random_entries(rng, dim * dim);
  std::vector<cplx> c(dim * dim);
  kernels::serial::matmul(dim, a, b, c);
  EXPECT_LT(max_diff(c, naive_matmul(dim, a, b)), 1e-11 * dim);
}

TEST_P(KernelSizes, ParallelIsBitwiseSerial) {
  const std::size_t dim = GetParam();
  std::mt19937_64 rng(100 + dim);
  const auto a = random_entries(rng, dim * dim);
  const auto b = random_entries(rng, dim * dim);
  std::vector<cplx> s(dim * dim), p(dim * dim);

  kernels::serial::matmul(dim, a, b, s);
  kernels::parallel::matmul(dim, a, b, p);
  EXPECT_EQ(s, p);

  kernels::serial::adjoint_matmul(dim, a, b, s);
  kernels::parallel::adjoint_matmul(dim, a, b, p);
  EXPECT_EQ(s, p);

  std::vector<cplx> ys(dim), yp(dim);
  const auto x = random_entries(rng, dim);
  kernels::serial::matvec(dim, a, x, ys);
  kernels::parallel::matvec(dim, a, x, yp);
  EXPECT_EQ(ys, yp);

  const auto small = random_entries(rng, 4);
  std::vector<cplx> ks(dim * dim * 4), kp(dim * dim * 4);
  kernels::serial::kron(dim, a, 2, small, ks);
  kernels::parallel::kron(dim, a, 2, small, kp);
  EXPECT_EQ(ks, kp);

  auto psi_s = random_entries(rng, dim);
  auto psi_p = psi_s;
  const kernels::Mat2 u{cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.0, 0.8), cplx(0.6, 0.0)};
  kernels::serial::apply_controlled_1q(psi_s, 2, 1, u);
  kernels::parallel::apply_controlled_1q(psi_p, 2, 1, u);
  EXPECT_EQ(psi_s, psi_p);

  const std::array<cplx, 4> ph{1.0, -1.0, cplx(0, 1), cplx(0, -1)};
  kernels::serial::apply_diagonal_2q(psi_s, 1, 4, ph);
  kernels::parallel::apply_diagonal_2q(psi_p, 1, 4, ph);
  EXPECT_EQ(psi_s, psi_p);
}

INSTANTIATE_TEST_SUITE_P(Dims, KernelSizes, ::testing::Values(2, 8, 64, 128));

TEST(Kernels, AdjointMatmul) {
  std::mt19937_64 rng(7);
  const std::size_t dim = 8;
  const auto a = random_entries(rng, dim * dim);
  const auto b = random_entries(rng, dim * dim);
  std::vector<cplx> ah(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) ah[j * dim + i] = std::conj(a[i * dim + j]);
  std::vector<cplx> c(dim * dim);
  kernels::serial::adjoint_matmul(dim, a, b, c);
  EXPECT_LT(max_diff(c, naive_matmul(dim, ah, b)), 1e-12);
}

TEST(Kernels, KronDefinition) {
  const std::vector<cplx> a{1.0, 2.0, 3.0, 4.0};
  const std::vector<cplx> b{0.0, 5.0, 6.0, 7.0};
  std::vector<cplx> out(16);
  kernels::serial::kron(2, a, 2, b, out);
  // out[(i*2+p), (j*2+q)] = a[i,j] b[p,q]
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          EXPECT_EQ(out[(i * 2 + p) * 4 + (j * 2 + q)], a[i * 2 + j] * b[p * 2 + q]);
}

TEST(Kernels, ControlledPairOnlyTouchesControlledAmplitudes) {
  std::vector<cplx> psi{1.0, 2.0, 3.0, 4.0};  // index bits (b1 b0)
  const kernels::Mat2 x{0.0, 1.0, 1.0, 0.0};
  kernels::serial::apply_controlled_1q(psi, 1, 2, x);  // control bit 1, target bit 0
  EXPECT_EQ(psi, (std::vector<cplx>{1.0, 2.0, 4.0, 3.0}));
}

}  // namespace
}  // namespace heisenet
