#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heisenet/error.hpp"
#include "heisenet/fixtures.hpp"
#include "heisenet/oracle.hpp"
#include "heisenet/relative.hpp"
#include "test_support.hpp"

namespace heisenet {
namespace {

using test::MatrixNear;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

double vec_distance(const StateVector& a, const StateVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<NetworkState> timeline(std::size_t n, const std::vector<Gate>& gs) {
  std::vector<NetworkState> out{init_network(n)};
  for (const Gate& g : gs) out.push_back(apply_gate(out.back(), g));
  return out;
}

TEST(Evolve, MeasurementCircuitGivesBellState) {
  const auto run = oracle::evolve(oracle::initial_state(2), fixtures::measurement_circuit());
  ASSERT_EQ(run.states.size(), 3u);
  const StateVector bell({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
  EXPECT_LE(vec_distance(run.states[2], bell), 1e-14);
}

TEST(Evolve, EmptyAndNot) {
  const StateVector psi0 = oracle::initial_state(3);
  EXPECT_EQ(oracle::evolve(psi0, {}).states.back(), psi0);
  // qubit 2 of 3 is index bit 1.
  EXPECT_EQ(oracle::evolve(psi0, {gates::not_gate(2)}).states.back(), StateVector::basis(8, 2));
}

TEST(Evolve, RejectsBadGates) {
  const Gate bad = gates::custom("scale", {1}, [](std::span<const Descriptor> d) { return d[0].z() * 2.0; });
  expect_error(ErrorKind::NonUnitary, [&] { oracle::evolve(oracle::initial_state(1), {bad}); });
  expect_error(ErrorKind::NonUnitary,
               [] { oracle::evolve(oracle::initial_state(2), {gates::f_gate(1, 2, .5, .5, .5, .5)}); });
}

TEST(Evolve, FixedDescriptorsArePaulis) {
  const auto d = oracle::fixed_descriptors(3);
  EXPECT_EQ(d[1].x(), tensor(tensor(pauli::identity2(), pauli::x()), pauli::identity2()));
  EXPECT_EQ(d[2].y(), tensor(CMatrix::identity(4), pauli::y()));
  EXPECT_EQ(d[0].z(), tensor(pauli::z(), CMatrix::identity(4)));
}

TEST(Evolve, CustomGateUsesFixedOperators) {
  fixtures::Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Gate> gs{fixtures::random_rotation(rng, 1 + trial % 2), gates::cnot(1, 2),
                               fixtures::random_rotation(rng, 2)};
    const auto run = oracle::evolve(oracle::initial_state(2), gs);
    const auto tl = timeline(2, gs);
    EXPECT_LE(oracle::cross_validate(run, tl, oracle::all_components(2)).max_residual, 1e-10);
  }
}

TEST(RelativeState, BellProjections) {
  const StateVector bell = oracle::evolve(oracle::initial_state(2), fixtures::measurement_circuit()).states[2];
  const CMatrix p_plus = tensor(pauli_projector(pauli::z(), 1), pauli::identity2());
  const CMatrix p_minus = tensor(pauli_projector(pauli::z(), -1), pauli::identity2());
  EXPECT_LE(vec_distance(oracle::schrodinger_relative_state(bell, p_plus), StateVector::basis(4, 0)), 1e-14);
  EXPECT_LE(vec_distance(oracle::schrodinger_relative_state(bell, p_minus), StateVector::basis(4, 3)), 1e-14);
  EXPECT_LE(vec_distance(oracle::schrodinger_relative_state(bell, CMatrix::identity(4)), bell), 1e-15);
  expect_error(ErrorKind::ZeroWeightBranch, [] {
    oracle::schrodinger_relative_state(StateVector::basis(2, 0), pauli_projector(pauli::z(), -1));
  });
}

TEST(PauliExpectation, MatchesDenseOperators) {
  fixtures::Rng rng(61);
  const auto run = oracle::evolve(oracle::initial_state(3),
                                  fixtures::random_circuit(rng, 3, 15, fixtures::GateSet::WithF));
  const auto d = oracle::fixed_descriptors(3);
  const StateVector& psi = run.states.back();
  const oracle::PauliProduct prod{{1, Component::X}, {3, Component::Y}, {2, Component::Z}};
  const CMatrix dense = d[0].x() * d[2].y() * d[1].z();
  EXPECT_NEAR(std::abs(oracle::pauli_expectation(psi, 3, prod) - expectation_value(psi, dense)), 0.0, 1e-12);
  const double w = oracle::pauli_projection_weight(psi, 3, {{2, Component::Z}}, -1);
  EXPECT_NEAR(w, (pauli_projector(d[1].z(), -1) * psi).norm() * (pauli_projector(d[1].z(), -1) * psi).norm(),
              1e-12);
}

TEST(CrossValidate, MeasurementCircuit) {
  const auto gs = fixtures::measurement_circuit();
  const auto cv = oracle::cross_validate(oracle::evolve(oracle::initial_state(2), gs), timeline(2, gs),
                                         {{{fixtures::kMeasurer, Component::Z}}});
  EXPECT_EQ(cv.entries.size(), 3u);
  EXPECT_LE(cv.max_residual, 1e-9);
}

TEST(CrossValidate, IdentityCircuit) {
  const std::vector<Gate> gs{gates::identity(), gates::identity()};
  const auto cv = oracle::cross_validate(oracle::evolve(oracle::initial_state(3), gs), timeline(3, gs),
                                         oracle::all_components(3));
  EXPECT_LE(cv.max_residual, 1e-15);
}

TEST(CrossValidate, RandomCircuits) {
  fixtures::Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const auto gs = fixtures::random_circuit(rng, 3, 20, fixtures::GateSet::WithF);
    std::vector<oracle::PauliProduct> obs = oracle::all_components(3);
    obs.push_back({{1, Component::X}, {2, Component::Y}});
    obs.push_back({{1, Component::Z}, {2, Component::Z}, {3, Component::X}});
    const auto cv = oracle::cross_validate(oracle::evolve(oracle::initial_state(3), gs), timeline(3, gs), obs);
    EXPECT_LE(cv.max_residual, 1e-9);
  }
}

TEST(CrossValidate, Mismatch) {
  const auto gs = fixtures::measurement_circuit();
  const auto run = oracle::evolve(oracle::initial_state(2), gs);
  auto longer = gs;
  longer.push_back(gates::hadamard(1));
  const auto tl = timeline(2, longer);
  expect_error(ErrorKind::CircuitMismatch, [&] { oracle::cross_validate(run, tl, oracle::all_components(2)); });
  expect_error(ErrorKind::CircuitMismatch,
               [&] { oracle::cross_validate(run, timeline(3, gs), oracle::all_components(2)); });
}

TEST(BranchWeights, RecordFramesMatchProjectionNorms) {
  fixtures::Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Gate> gs = fixtures::random_circuit(rng, 3, 6, fixtures::GateSet::Standard);
    gs.push_back(gates::cnot(1, 2));
    const auto run = oracle::evolve(oracle::initial_state(3), gs);
    const NetworkState s = apply_gates(init_network(3), gs).with_record(2, Component::Z);
    const RecordKey key{2, Component::Z, s.time()};
    for (const auto& f : make_pvm(s, key)) {
      const double w = oracle::pauli_projection_weight(run.states.back(), 3, {{2, Component::Z}},
                                                       static_cast<int>(f.label));
      EXPECT_NEAR(w, f.weight, 1e-9);
      if (f.weight <= 1e-9) continue;
      // Relative expectations agree with the Schroedinger branch state.
      const CMatrix p0 = pauli_projector(oracle::fixed_descriptors(3)[1].z(), static_cast<int>(f.label));
      const StateVector branch = oracle::schrodinger_relative_state(run.states.back(), p0);
      for (int q = 1; q <= 3; ++q) {
        const cplx h = relative_expectation(s, s.component(q, Component::Z), f);
        const cplx o = oracle::pauli_expectation(branch, 3, {{q, Component::Z}});
        EXPECT_NEAR(std::abs(h - o), 0.0, 1e-9);
      }
    }
  }
}

TEST(Evolve, NormPreserved) {
  fixtures::Rng rng(73);
  const auto run = oracle::evolve(oracle::initial_state(4),
                                  fixtures::random_circuit(rng, 4, 40, fixtures::GateSet::WithF));
  for (const auto& psi : run.states) EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
}

}  // namespace
}  // namespace heisenet
