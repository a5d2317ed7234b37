#include "heisenet/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heisenet::fixtures {

std::vector<Gate> measurement_circuit() {
  return {gates::hadamard(kSystem), gates::cnot(kSystem, kMeasurer)};
}

NetworkState measured_network(const Tolerances& tol) {
  NetworkState s = init_network(2, tol);
  for (const Gate& g : measurement_circuit()) s = apply_gate(s, g);
  return s.with_record(kSystem, Component::Z).with_record(kMeasurer, Component::Z);
}

NetworkState bell_rz_network(double theta, const Tolerances& tol) {
  return apply_gate(measured_network(tol), gates::rz(kMeasurer, theta));
}

double random_angle(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  return angle(rng);
}

Gate random_f_gate(Rng& rng, int a, int b) {
  std::bernoulli_distribution coin(0.5);
  // Eigenvalues e[m][s] for z values m of a and s of b, index 0 <-> +1.
  double e[2][2];
  for (auto& row : e)
    for (double& v : row) v = coin(rng) ? 1.0 : -1.0;
  const double alpha = (e[0][0] + e[0][1] + e[1][0] + e[1][1]) / 4;
  const double beta = (e[0][0] + e[0][1] - e[1][0] - e[1][1]) / 4;
  const double gamma = (e[0][0] - e[0][1] + e[1][0] - e[1][1]) / 4;
  const double delta = (e[0][0] - e[0][1] - e[1][0] + e[1][1]) / 4;
  return gates::f_gate(a, b, alpha, beta, gamma, delta);
}

Gate random_rotation(Rng& rng, int target) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double nx = normal(rng), ny = normal(rng), nz = normal(rng);
  if (nx * nx + ny * ny + nz * nz < 1e-6) nz = 1.0;
  return gates::rotation(target, nx, ny, nz, random_angle(rng));
}

Gate random_gate(Rng& rng, std::size_t n, GateSet set) {
  std::uniform_int_distribution<int> qubit(1, static_cast<int>(n));
  auto distinct = [&](std::vector<int> taken) {
    int q;
    do {
      q = qubit(rng);
    } while (std::find(taken.begin(), taken.end(), q) != taken.end());
    return q;
  };
  std::vector<int> kinds{0, 1, 3};  // NOT, H, RZ
  if (n >= 2) kinds.push_back(2);   // CNOT
  if (n >= 3) kinds.push_back(4);   // CCNOT
  if (n >= 2 && set == GateSet::WithF) kinds.push_back(5);
  std::uniform_int_distribution<std::size_t> pick(0, kinds.size() - 1);
  switch (kinds[pick(rng)]) {
    case 0: return gates::not_gate(qubit(rng));
    case 1: return gates::hadamard(qubit(rng));
    case 2: {
      const int c = qubit(rng);
      return gates::cnot(c, distinct({c}));
    }
    case 3: return gates::rz(qubit(rng), random_angle(rng));
    case 4: {
      const int c1 = qubit(rng);
      const int c2 = distinct({c1});
      return gates::ccnot(c1, c2, distinct({c1, c2}));
    }
    default: {
      const int a = qubit(rng);
      return random_f_gate(rng, a, distinct({a}));
    }
  }
}

std::vector<Gate> random_circuit(Rng& rng, std::size_t n, std::size_t depth, GateSet set) {
  std::vector<Gate> out;
  out.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) out.push_back(random_gate(rng, n, set));
  return out;
}

}  // namespace heisenet::fixtures
