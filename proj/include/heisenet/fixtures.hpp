#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heisenet/network.hpp"

// Canonical circuits and random generators shared by the test suites and the
// `selftest` command.

namespace heisenet::fixtures {

// Two-qubit measurement network: qubit 1 is the measured system S, qubit 2
// the measurer M.
inline constexpr int kSystem = 1;
inline constexpr int kMeasurer = 2;

/// H on S, then CNOT S -> M.
std::vector<Gate> measurement_circuit();

/// The measurement network at t = 2 with records of q_Sz and q_Mz taken.
NetworkState measured_network(const Tolerances& tol = {});

/// Bell pair on (1, 2) followed by RZ(theta) on qubit 2, with q_1z and q_2z
/// recorded at t = 2 before the rotation.
NetworkState bell_rz_network(double theta, const Tolerances& tol = {});

enum class GateSet { Standard, WithF };

using Rng = std::mt19937_64;

/// Uniformly drawn angle in [0, 2 pi).
double random_angle(Rng& rng);

/// One of the sixteen real-coefficient F gates on (a, b): the four eigenvalue
/// signs are drawn at random and the coefficients solved from them.
Gate random_f_gate(Rng& rng, int a, int b);

/// Random single-qubit rotation with a random axis and angle.
Gate random_rotation(Rng& rng, int target);

/// Random gate from {NOT, H, CNOT, RZ, CCNOT} (plus F with GateSet::WithF).
/// Multi-qubit gates are skipped when the network is too small.
Gate random_gate(Rng& rng, std::size_t n, GateSet set);

std::vector<Gate> random_circuit(Rng& rng, std::size_t n, std::size_t depth, GateSet set);

}  // namespace heisenet::fixtures
