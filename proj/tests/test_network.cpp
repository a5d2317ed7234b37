#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heisenet/error.hpp"
#include "heisenet/fixtures.hpp"
#include "heisenet/network.hpp"
#include "heisenet/oracle.hpp"
#include "test_support.hpp"

namespace heisenet {
namespace {

using test::MatrixNear;
constexpr double kPi = std::numbers::pi;

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

const CMatrix& I2() { return pauli::identity2(); }

TEST(InitNetwork, SingleQubitIsPauli) {
  const NetworkState s = init_network(1);
  EXPECT_EQ(s.component(1, Component::X), pauli::x());
  EXPECT_EQ(s.component(1, Component::Y), pauli::y());
  EXPECT_EQ(s.component(1, Component::Z), pauli::z());
  EXPECT_EQ(s.time(), 0u);
}

TEST(InitNetwork, TwoQubits) {
  const NetworkState s = init_network(2);
  EXPECT_EQ(s.component(2, Component::X), tensor(I2(), pauli::x()));
  EXPECT_EQ(s.component(2, Component::Y), tensor(I2(), pauli::y()));
  EXPECT_EQ(s.component(2, Component::Z), tensor(I2(), pauli::z()));
  EXPECT_EQ(expectation(s, s.component(1, Component::Z)), cplx(1.0));
}

TEST(InitNetwork, EveryZSharpAtOne) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const NetworkState s = init_network(n);
    for (int a = 1; a <= static_cast<int>(n); ++a) {
      EXPECT_EQ(expectation(s, s.component(a, Component::Z)), cplx(1.0));
      EXPECT_EQ(is_sharp(s, s.component(a, Component::Z)), std::optional<double>(1.0));
    }
    EXPECT_LE(algebra_residual(s), 1e-15);
  }
}

TEST(InitNetwork, SizeLimit) {
  expect_error(ErrorKind::SizeLimit, [] { init_network(11); });
  expect_error(ErrorKind::SizeLimit, [] { init_network(0); });
}

TEST(Gates, NotUnitaryIsEmbeddedPauliX) {
  const NetworkState s = init_network(3);
  EXPECT_EQ(build_gate_unitary(gates::not_gate(2), s),
            tensor(tensor(I2(), pauli::x()), I2()));
  EXPECT_EQ(build_gate_unitary(gates::identity(), s), CMatrix::identity(8));
}

TEST(Gates, NotToggles) {
  std::mt19937_64 rng(1);
  NetworkState s = init_network(3);
  s = apply_gates(s, fixtures::random_circuit(rng, 3, 6, fixtures::GateSet::Standard));
  const NetworkState t = apply_gate(s, gates::not_gate(2));
  EXPECT_TRUE(MatrixNear(t.component(2, Component::X), s.component(2, Component::X), 1e-12));
  EXPECT_TRUE(MatrixNear(t.component(2, Component::Y), -s.component(2, Component::Y), 1e-12));
  EXPECT_TRUE(MatrixNear(t.component(2, Component::Z), -s.component(2, Component::Z), 1e-12));
  for (int a : {1, 3})
    for (Component c : kComponents)
      EXPECT_TRUE(MatrixNear(t.component(a, c), s.component(a, c), 1e-12));
  EXPECT_EQ(t.time(), s.time() + 1);
}

TEST(Gates, HadamardSwapsXAndZ) {
  const NetworkState s = init_network(2);
  const NetworkState t = apply_gate(s, gates::hadamard(1));
  EXPECT_TRUE(MatrixNear(t.component(1, Component::X), s.component(1, Component::Z), 1e-14));
  EXPECT_TRUE(MatrixNear(t.component(1, Component::Y), -s.component(1, Component::Y), 1e-14));
  EXPECT_TRUE(MatrixNear(t.component(1, Component::Z), s.component(1, Component::X), 1e-14));
}

TEST(Gates, RzRotatesAboutZ) {
  std::mt19937_64 rng(2);
  for (double theta : {0.0, 0.3, kPi / 2, 2.5, 5.9}) {
    NetworkState s = init_network(2);
    s = apply_gates(s, fixtures::random_circuit(rng, 2, 5, fixtures::GateSet::Standard));
    const NetworkState t = apply_gate(s, gates::rz(2, theta));
    const CMatrix& x = s.component(2, Component::X);
    const CMatrix& y = s.component(2, Component::Y);
    const double c = std::cos(theta), sn = std::sin(theta);
    EXPECT_TRUE(MatrixNear(t.component(2, Component::X), x * c - y * sn, 1e-12));
    EXPECT_TRUE(MatrixNear(t.component(2, Component::Y), y * c + x * sn, 1e-12));
    EXPECT_TRUE(MatrixNear(t.component(2, Component::Z), s.component(2, Component::Z), 1e-12));
  }
}

// Descriptors of the measurement network written out by hand: S = qubit 1,
// M = qubit 2, after H on S and CNOT S -> M.
TEST(Gates, MeasurementNetworkDescriptors) {
  const NetworkState s = fixtures::measured_network();
  const CMatrix &X = pauli::x(), &Y = pauli::y(), &Z = pauli::z();
  EXPECT_TRUE(MatrixNear(s.component(1, Component::X), tensor(Z, X), 1e-12));
  EXPECT_TRUE(MatrixNear(s.component(1, Component::Y), -tensor(Y, X), 1e-12));
  EXPECT_TRUE(MatrixNear(s.component(1, Component::Z), tensor(X, I2()), 1e-12));
  EXPECT_TRUE(MatrixNear(s.component(2, Component::X), tensor(I2(), X), 1e-12));
  EXPECT_TRUE(MatrixNear(s.component(2, Component::Y), tensor(X, Y), 1e-12));
  EXPECT_TRUE(MatrixNear(s.component(2, Component::Z), tensor(X, Z), 1e-12));
}

TEST(Gates, CnotUnitaryAtTimeOneReproducesRecordedDescriptors) {
  const NetworkState s1 = apply_gate(init_network(2), gates::hadamard(1));
  const CMatrix u = build_gate_unitary(gates::cnot(1, 2), s1);
  const NetworkState s2 = fixtures::measured_network();
  for (int a = 1; a <= 2; ++a)
    for (Component c : kComponents)
      EXPECT_TRUE(MatrixNear(conjugate(u, s1.component(a, c)), s2.component(a, c), 1e-12));
}

TEST(Gates, CcnotFlipsTargetOnlyWhenBothControlsSet) {
  for (std::uint32_t in = 0; in < 8; ++in) {
    NetworkState s = init_network(3);
    for (int q = 1; q <= 3; ++q)
      if (in >> (q - 1) & 1) s = apply_gate(s, gates::not_gate(q));
    s = apply_gate(s, gates::ccnot(1, 2, 3));
    const bool flip = (in & 3) == 3;
    const double expected = ((in >> 2 & 1) ^ flip) ? -1.0 : 1.0;
    EXPECT_NEAR(expectation(s, s.component(3, Component::Z)).real(), expected, 1e-12);
  }
}

TEST(Gates, FGateEigenvalues) {
  const Gate f = gates::f_gate(1, 2, 0.5, 0.5, 0.5, -0.5);
  const auto ev = f_gate_eigenvalues(f);
  for (double v : ev) EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
  EXPECT_NO_THROW(validate_gate(f, 2, {}));
  expect_error(ErrorKind::NonUnitary,
               [] { validate_gate(gates::f_gate(1, 2, 0.5, 0.5, 0.5, 0.5), 2, {}); });
}

TEST(Gates, Validation) {
  expect_error(ErrorKind::ValidationError, [] { validate_gate(gates::cnot(1, 1), 2, {}); });
  expect_error(ErrorKind::ValidationError, [] { validate_gate(gates::not_gate(3), 2, {}); });
  expect_error(ErrorKind::ValidationError, [] { validate_gate(gates::rz(1, NAN), 2, {}); });
  expect_error(ErrorKind::ValidationError,
               [] { validate_gate(gates::ccnot(1, 2, 3), 2, {}); });
}

TEST(Gates, CustomBuilderMustBeUnitary) {
  const Gate bad = gates::custom("double", {1}, [](std::span<const Descriptor> d) {
    return d[0].x() * 2.0;
  });
  expect_error(ErrorKind::NonUnitary, [&] { apply_gate(init_network(1), bad); });
}

TEST(Gates, LocalityLeavesOtherQubitsUntouched) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    NetworkState s = init_network(4);
    s = apply_gates(s, fixtures::random_circuit(rng, 4, 10, fixtures::GateSet::Standard));
    const Gate g = fixtures::random_gate(rng, 4, fixtures::GateSet::WithF);
    const NetworkState t = apply_gate(s, g);
    for (int a = 1; a <= 4; ++a) {
      if (std::find(g.operands.begin(), g.operands.end(), a) != g.operands.end()) continue;
      for (Component c : kComponents)
        EXPECT_TRUE(MatrixNear(t.component(a, c), s.component(a, c), 1e-10)) << describe(g);
    }
  }
}

TEST(Network, AlgebraConservedOverRandomCircuits) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    NetworkState s = init_network(n);
    s = apply_gates(s, fixtures::random_circuit(rng, n, 50, fixtures::GateSet::WithF));
    EXPECT_LE(algebra_residual(s), 1e-8);
  }
}

TEST(Expectation, MeasurementNetwork) {
  const NetworkState s = fixtures::measured_network();
  EXPECT_NEAR(std::abs(expectation(s, s.component(2, Component::Z))), 0.0, 1e-12);
  expect_error(ErrorKind::DimMismatch, [&] { expectation(s, CMatrix::identity(2)); });
}

TEST(Expectation, HiddenAngleInvisibleLocally) {
  for (int k = 0; k < 16; ++k) {
    const NetworkState s = fixtures::bell_rz_network(2 * kPi * k / 16);
    for (int a = 1; a <= 2; ++a)
      for (Component c : kComponents)
        EXPECT_LE(std::abs(expectation(s, s.component(a, c))), 1e-10);
  }
  const NetworkState s0 = fixtures::bell_rz_network(0.0);
  const NetworkState s1 = fixtures::bell_rz_network(kPi / 2);
  EXPECT_GT(distance(s0.component(2, Component::X), s1.component(2, Component::X)), 0.1);
}

TEST(Sharpness, Examples) {
  const NetworkState s1 = apply_gate(init_network(2), gates::hadamard(1));
  EXPECT_FALSE(is_sharp(s1, s1.component(1, Component::Z)).has_value());
  const NetworkState s2 = fixtures::measured_network();
  const auto v = is_sharp(s2, s2.component(1, Component::Z) * s2.component(2, Component::Z));
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v, 1.0, 1e-12);
  expect_error(ErrorKind::NotHermitian,
               [&] { is_sharp(s2, CMatrix{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}); });
}

TEST(Entanglement, Examples) {
  EXPECT_FALSE(are_entangled(init_network(2), 1, 2).entangled);

  const NetworkState s = fixtures::measured_network();
  const auto w = are_entangled(s, 1, 2);
  EXPECT_TRUE(w.entangled);
  EXPECT_EQ(w.first, Component::Z);
  EXPECT_EQ(w.second, Component::Z);
  EXPECT_NEAR(w.discrepancy, 1.0, 1e-12);

  const NetworkState t = apply_gate(s, gates::cnot(1, 2));
  EXPECT_FALSE(are_entangled(t, 1, 2).entangled);
  // The oracle agrees: the state factorizes again.
  const auto run = oracle::evolve(oracle::initial_state(2),
                                  {gates::hadamard(1), gates::cnot(1, 2), gates::cnot(1, 2)});
  const StateVector& psi = run.states.back();
  EXPECT_NEAR(std::abs(psi[0] * psi[3] - psi[1] * psi[2]), 0.0, 1e-12);

  expect_error(ErrorKind::ValidationError, [&] { are_entangled(s, 1, 1); });
}

TEST(Records, SnapshotsSurviveLaterGates) {
  const NetworkState s = fixtures::measured_network();
  const RecordKey key{1, Component::Z, 2};
  ASSERT_TRUE(s.has_record(key));
  const NetworkState t = apply_gate(s, gates::rz(1, 0.7));
  EXPECT_EQ(t.record(key), s.component(1, Component::Z));
  expect_error(ErrorKind::ValidationError, [&] { t.record({1, Component::X, 2}); });
  EXPECT_EQ(describe(key), "q1z@2");
}

}  // namespace
}  // namespace heisenet
