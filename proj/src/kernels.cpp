#include "heisenet/kernels.hpp"

#include <algorithm>
#include <cstdint>

#ifdef HEISENET_HAVE_OPENMP
#include <omp.h>
#endif

namespace heisenet::kernels {

namespace {

// Explicit arithmetic avoids the NaN-recovery path of std::complex operator*.
inline void mul_add(cplx& acc, const cplx& a, const cplx& b) {
  acc = cplx(acc.real() + (a.real() * b.real() - a.imag() * b.imag()),
             acc.imag() + (a.real() * b.imag() + a.imag() * b.real()));
}

inline cplx mul(const cplx& a, const cplx& b) {
  return cplx(a.real() * b.real() - a.imag() * b.imag(),
              a.real() * b.imag() + a.imag() * b.real());
}

// Per-row / per-pair bodies shared by both flavours, so that the reduction
// order is identical regardless of how rows are scheduled.

inline void matmul_row(std::size_t dim, std::size_t i, const cplx* a, const cplx* b, cplx* c) {
  cplx* crow = c + i * dim;
  std::fill(crow, crow + dim, cplx(0.0, 0.0));
  const cplx* arow = a + i * dim;
  for (std::size_t k = 0; k < dim; ++k) {
    const cplx aik = arow[k];
    if (aik == cplx(0.0, 0.0)) continue;
    const cplx* brow = b + k * dim;
    for (std::size_t j = 0; j < dim; ++j) mul_add(crow[j], aik, brow[j]);
  }
}

inline void adjoint_matmul_row(std::size_t dim, std::size_t i, const cplx* a, const cplx* b,
                               cplx* c) {
  cplx* crow = c + i * dim;
  std::fill(crow, crow + dim, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < dim; ++k) {
    const cplx aki = std::conj(a[k * dim + i]);
    if (aki == cplx(0.0, 0.0)) continue;
    const cplx* brow = b + k * dim;
    for (std::size_t j = 0; j < dim; ++j) mul_add(crow[j], aki, brow[j]);
  }
}

inline void kron_row(std::size_t ra, const cplx* a, std::size_t rb, const cplx* b, cplx* out,
                     std::size_t row) {
  const std::size_t dim = ra * rb;
  const std::size_t i = row / rb;
  const std::size_t p = row % rb;
  cplx* orow = out + row * dim;
  for (std::size_t j = 0; j < ra; ++j) {
    const cplx aij = a[i * ra + j];
    for (std::size_t q = 0; q < rb; ++q) orow[j * rb + q] = mul(aij, b[p * rb + q]);
  }
}

inline cplx matvec_row(std::size_t dim, std::size_t i, const cplx* a, const cplx* x) {
  cplx acc(0.0, 0.0);
  const cplx* arow = a + i * dim;
  for (std::size_t k = 0; k < dim; ++k) mul_add(acc, arow[k], x[k]);
  return acc;
}

// Index of the pair member with the target bit cleared.
inline std::uint64_t pair_base(std::uint64_t idx, std::uint64_t target_bit) {
  const std::uint64_t low = idx & (target_bit - 1);
  return ((idx - low) << 1) | low;
}

inline void apply_pair(cplx* psi, std::uint64_t i0, std::uint64_t target_bit,
                       std::uint64_t control_mask, const Mat2& u) {
  if ((i0 & control_mask) != control_mask) return;
  const std::uint64_t i1 = i0 | target_bit;
  const cplx v0 = psi[i0];
  const cplx v1 = psi[i1];
  cplx r0 = mul(u[0], v0);
  mul_add(r0, u[1], v1);
  cplx r1 = mul(u[2], v0);
  mul_add(r1, u[3], v1);
  psi[i0] = r0;
  psi[i1] = r1;
}

inline std::size_t diag_slot(std::uint64_t i, std::uint64_t bit_a, std::uint64_t bit_b) {
  return ((i & bit_a) ? 2u : 0u) + ((i & bit_b) ? 1u : 0u);
}

}  // namespace

bool openmp_enabled() noexcept {
#ifdef HEISENET_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

namespace serial {

void matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
            std::span<cplx> c) {
  for (std::size_t i = 0; i < dim; ++i) matmul_row(dim, i, a.data(), b.data(), c.data());
}

void adjoint_matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> c) {
  for (std::size_t i = 0; i < dim; ++i)
    adjoint_matmul_row(dim, i, a.data(), b.data(), c.data());
}

void kron(std::size_t ra, std::span<const cplx> a, std::size_t rb, std::span<const cplx> b,
          std::span<cplx> out) {
  for (std::size_t row = 0; row < ra * rb; ++row)
    kron_row(ra, a.data(), rb, b.data(), out.data(), row);
}

void matvec(std::size_t dim, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  for (std::size_t i = 0; i < dim; ++i) y[i] = matvec_row(dim, i, a.data(), x.data());
}

void apply_controlled_1q(std::span<cplx> psi, std::uint64_t target_bit,
                         std::uint64_t control_mask, const Mat2& u) {
  const std::uint64_t pairs = psi.size() / 2;
  for (std::uint64_t idx = 0; idx < pairs; ++idx)
    apply_pair(psi.data(), pair_base(idx, target_bit), target_bit, control_mask, u);
}

void apply_diagonal_2q(std::span<cplx> psi, std::uint64_t bit_a, std::uint64_t bit_b,
                       const std::array<cplx, 4>& phases) {
  for (std::uint64_t i = 0; i < psi.size(); ++i)
    psi[i] = mul(phases[diag_slot(i, bit_a, bit_b)], psi[i]);
}

}  // namespace serial

namespace parallel {

void matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
            std::span<cplx> c) {
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    matmul_row(dim, static_cast<std::size_t>(i), a.data(), b.data(), c.data());
}

void adjoint_matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> c) {
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    adjoint_matmul_row(dim, static_cast<std::size_t>(i), a.data(), b.data(), c.data());
}

void kron(std::size_t ra, std::span<const cplx> a, std::size_t rb, std::span<const cplx> b,
          std::span<cplx> out) {
  const auto rows = static_cast<std::int64_t>(ra * rb);
#pragma omp parallel for schedule(static)
  for (std::int64_t row = 0; row < rows; ++row)
    kron_row(ra, a.data(), rb, b.data(), out.data(), static_cast<std::size_t>(row));
}

void matvec(std::size_t dim, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    y[static_cast<std::size_t>(i)] =
        matvec_row(dim, static_cast<std::size_t>(i), a.data(), x.data());
}

void apply_controlled_1q(std::span<cplx> psi, std::uint64_t target_bit,
                         std::uint64_t control_mask, const Mat2& u) {
  const auto pairs = static_cast<std::int64_t>(psi.size() / 2);
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < pairs; ++idx)
    apply_pair(psi.data(), pair_base(static_cast<std::uint64_t>(idx), target_bit), target_bit,
               control_mask, u);
}

void apply_diagonal_2q(std::span<cplx> psi, std::uint64_t bit_a, std::uint64_t bit_b,
                       const std::array<cplx, 4>& phases) {
  const auto n = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    psi[u] = mul(phases[diag_slot(u, bit_a, bit_b)], psi[u]);
  }
}

}  // namespace parallel

namespace {
inline bool go_parallel(std::size_t dim) {
  return openmp_enabled() && dim >= kParallelMinDim;
}
}  // namespace

void matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
            std::span<cplx> c) {
  go_parallel(dim) ? parallel::matmul(dim, a, b, c) : serial::matmul(dim, a, b, c);
}

void adjoint_matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> c) {
  go_parallel(dim) ? parallel::adjoint_matmul(dim, a, b, c)
                   : serial::adjoint_matmul(dim, a, b, c);
}

void kron(std::size_t ra, std::span<const cplx> a, std::size_t rb, std::span<const cplx> b,
          std::span<cplx> out) {
  go_parallel(ra * rb) ? parallel::kron(ra, a, rb, b, out) : serial::kron(ra, a, rb, b, out);
}

void matvec(std::size_t dim, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y) {
  go_parallel(dim) ? parallel::matvec(dim, a, x, y) : serial::matvec(dim, a, x, y);
}

void apply_controlled_1q(std::span<cplx> psi, std::uint64_t target_bit,
                         std::uint64_t control_mask, const Mat2& u) {
  go_parallel(psi.size()) ? parallel::apply_controlled_1q(psi, target_bit, control_mask, u)
                          : serial::apply_controlled_1q(psi, target_bit, control_mask, u);
}

void apply_diagonal_2q(std::span<cplx> psi, std::uint64_t bit_a, std::uint64_t bit_b,
                       const std::array<cplx, 4>& phases) {
  go_parallel(psi.size()) ? parallel::apply_diagonal_2q(psi, bit_a, bit_b, phases)
                          : serial::apply_diagonal_2q(psi, bit_a, bit_b, phases);
}

}  // namespace heisenet::kernels
