#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "heisenet/kernels.hpp"

namespace {

using heisenet::kernels::cplx;
namespace serial = heisenet::kernels::serial;
namespace parallel = heisenet::kernels::parallel;

std::vector<cplx> random_data(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(count);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

template <auto Fn>
void BM_matmul(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(dim * dim, 1), b = random_data(dim * dim, 2);
  std::vector<cplx> c(dim * dim);
  for (auto _ : state) {
    Fn(dim, a, b, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim * dim * dim));
}

template <auto Fn>
void BM_kron(benchmark::State& state) {
  const auto ra = static_cast<std::size_t>(state.range(0)), rb = std::size_t{2};
  const auto a = random_data(ra * ra, 3), b = random_data(rb * rb, 4);
  std::vector<cplx> out(ra * ra * rb * rb);
  for (auto _ : state) {
    Fn(ra, a, rb, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Fn>
void BM_matvec(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(dim * dim, 5), x = random_data(dim, 6);
  std::vector<cplx> y(dim);
  for (auto _ : state) {
    Fn(dim, a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <auto Fn>
void BM_controlled_1q(benchmark::State& state) {
  const auto qubits = static_cast<unsigned>(state.range(0));
  auto psi = random_data(std::size_t{1} << qubits, 7);
  const double h = 0.7071067811865476;
  const heisenet::kernels::Mat2 u{cplx(h), cplx(h), cplx(h), cplx(-h)};
  for (auto _ : state) {
    Fn(psi, 0, std::uint64_t{1} << (qubits - 1), u);
    benchmark::DoNotOptimize(psi.data());
  }
}

}  // namespace

BENCHMARK(BM_matmul<serial::matmul>)->Name("matmul/serial")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_matmul<parallel::matmul>)->Name("matmul/parallel")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_kron<serial::kron>)->Name("kron/serial")->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_kron<parallel::kron>)->Name("kron/parallel")->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_matvec<serial::matvec>)->Name("matvec/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_matvec<parallel::matvec>)->Name("matvec/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_controlled_1q<serial::apply_controlled_1q>)->Name("controlled_1q/serial")->DenseRange(8, 20, 4);
BENCHMARK(BM_controlled_1q<parallel::apply_controlled_1q>)->Name("controlled_1q/parallel")->DenseRange(8, 20, 4);
BENCHMARK_MAIN();
