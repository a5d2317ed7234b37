#pragma once

// Dense complex kernels in two flavours: `serial` is the reference
// implementation, `parallel` distributes the outer loop with OpenMP. Both
// accumulate every output element in the same order, so their results are
// bitwise identical; tests rely on that.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace heisenet::kernels {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major 2x2

// True when the library was compiled with OpenMP.
bool openmp_enabled() noexcept;

// Below this many rows the parallel dispatch falls back to serial.
inline constexpr std::size_t kParallelMinDim = 64;

// Matrices are dim x dim, row-major. Outputs must not alias inputs.
//   matmul            c = a * b
//   adjoint_matmul    c = a^H * b
//   kron              out = a (x) b, a is ra x ra, b is rb x rb
//   matvec            y = a * x
//   apply_controlled_1q
//       applies u to the `target_bit` pair of every amplitude whose index
//       satisfies (index & control_mask) == control_mask. A set bit means the
//       qubit is in its second basis state (z = -1).
//   apply_diagonal_2q psi[i] *= phases[2 * bit_a(i) + bit_b(i)]
namespace serial {
void matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
            std::span<cplx> c);
void adjoint_matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> c);
void kron(std::size_t ra, std::span<const cplx> a, std::size_t rb, std::span<const cplx> b,
          std::span<cplx> out);
void matvec(std::size_t dim, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
void apply_controlled_1q(std::span<cplx> psi, std::uint64_t target_bit,
                         std::uint64_t control_mask, const Mat2& u);
void apply_diagonal_2q(std::span<cplx> psi, std::uint64_t bit_a, std::uint64_t bit_b,
                       const std::array<cplx, 4>& phases);
}  // namespace serial

namespace parallel {
void matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
            std::span<cplx> c);
void adjoint_matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> c);
void kron(std::size_t ra, std::span<const cplx> a, std::size_t rb, std::span<const cplx> b,
          std::span<cplx> out);
void matvec(std::size_t dim, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
void apply_controlled_1q(std::span<cplx> psi, std::uint64_t target_bit,
                         std::uint64_t control_mask, const Mat2& u);
void apply_diagonal_2q(std::span<cplx> psi, std::uint64_t bit_a, std::uint64_t bit_b,
                       const std::array<cplx, 4>& phases);
}  // namespace parallel

// Size-based dispatch used by the rest of the library.
void matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
            std::span<cplx> c);
void adjoint_matmul(std::size_t dim, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> c);
void kron(std::size_t ra, std::span<const cplx> a, std::size_t rb, std::span<const cplx> b,
          std::span<cplx> out);
void matvec(std::size_t dim, std::span<const cplx> a, std::span<const cplx> x,
            std::span<cplx> y);
void apply_controlled_1q(std::span<cplx> psi, std::uint64_t target_bit,
                         std::uint64_t control_mask, const Mat2& u);
void apply_diagonal_2q(std::span<cplx> psi, std::uint64_t bit_a, std::uint64_t bit_b,
                       const std::array<cplx, 4>& phases);

}  // namespace heisenet::kernels
