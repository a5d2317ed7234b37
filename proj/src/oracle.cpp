#include "heisenet/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "heisenet/error.hpp"
#include "heisenet/kernels.hpp"

namespace heisenet::oracle {

namespace {

std::uint64_t bit_of(std::size_t n, int qubit) {
  return std::uint64_t{1} << (n - static_cast<std::size_t>(qubit));
}

// sigma_c on one qubit applied in place.
void apply_pauli(std::vector<cplx>& v, std::size_t n, const PauliFactor& f) {
  const std::uint64_t m = bit_of(n, f.qubit);
  std::vector<cplx> out(v.size());
  for (std::uint64_t i = 0; i < v.size(); ++i) {
    const bool one = (i & m) != 0;
    switch (f.component) {
      case Component::X: out[i] = v[i ^ m]; break;
      case Component::Y: out[i] = (one ? cplx(0, 1) : cplx(0, -1)) * v[i ^ m]; break;
      case Component::Z: out[i] = one ? -v[i] : v[i]; break;
    }
  }
  v = std::move(out);
}

std::vector<cplx> apply_product(const StateVector& psi, std::size_t n,
                                const PauliProduct& factors) {
  std::vector<cplx> v(psi.data().begin(), psi.data().end());
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) apply_pauli(v, n, *it);
  return v;
}

}  // namespace

StateVector initial_state(std::size_t n) {
  if (n < 1 || n > kMaxQubits) throw Error(ErrorKind::SizeLimit, "oracle network size");
  return StateVector::basis(std::size_t{1} << n, 0);
}

std::vector<Descriptor> fixed_descriptors(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Descriptor> out;
  for (std::size_t a = 1; a <= n; ++a) {
    const std::uint64_t m = bit_of(n, static_cast<int>(a));
    Descriptor d;
    d.qubit = static_cast<int>(a);
    for (auto& q : d.q) q = CMatrix(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
      const bool one = (i & m) != 0;
      d.q[0](i, i ^ m) = 1.0;
      d.q[1](i, i ^ m) = one ? cplx(0, 1) : cplx(0, -1);
      d.q[2](i, i) = one ? -1.0 : 1.0;
    }
    out.push_back(std::move(d));
  }
  return out;
}

void apply_fixed_gate(StateVector& psi, std::size_t n, const Gate& g, const Tolerances& tol) {
  validate_gate(g, n, tol);
  const double r = 1.0 / std::numbers::sqrt2;
  auto bit = [&](std::size_t i) { return bit_of(n, g.operands[i]); };
  const kernels::Mat2 x{0.0, 1.0, 1.0, 0.0};
  switch (g.kind) {
    case GateKind::I:
      break;
    case GateKind::NOT:
      kernels::apply_controlled_1q(psi.data(), bit(0), 0, x);
      break;
    case GateKind::H:
      kernels::apply_controlled_1q(psi.data(), bit(0), 0, kernels::Mat2{r, r, r, -r});
      break;
    case GateKind::RZ: {
      const double h = g.params[0] / 2;
      kernels::apply_controlled_1q(
          psi.data(), bit(0), 0,
          kernels::Mat2{std::polar(1.0, -h), 0.0, 0.0, std::polar(1.0, h)});
      break;
    }
    case GateKind::CNOT:
      kernels::apply_controlled_1q(psi.data(), bit(1), bit(0), x);
      break;
    case GateKind::CCNOT:
      kernels::apply_controlled_1q(psi.data(), bit(2), bit(0) | bit(1), x);
      break;
    case GateKind::F: {
      // index bit clear <-> z = +1
      const double al = g.params[0], be = g.params[1], ga = g.params[2], de = g.params[3];
      const std::array<cplx, 4> phases{al + be + ga + de, al + be - ga - de, al - be + ga - de,
                                       al - be - ga + de};
      kernels::apply_diagonal_2q(psi.data(), bit(0), bit(1), phases);
      break;
    }
    case GateKind::CUSTOM: {
      const CMatrix u = g.custom(fixed_descriptors(n));
      const double res = unitarity_residual(u);
      if (res > tol.unitary) {
        throw Error(ErrorKind::NonUnitary, describe(g) + ": ||u^H u - 1|| = " + format_residual(res));
      }
      psi = u * psi;
      break;
    }
  }
}

SchrodingerRun evolve(const StateVector& initial, std::vector<Gate> gates, const Tolerances& tol) {
  if (std::abs(initial.norm() - 1.0) > tol.norm) {
    throw Error(ErrorKind::ValidationError, "initial state is not normalized");
  }
  SchrodingerRun run;
  run.qubits = static_cast<std::size_t>(std::countr_zero(initial.dim()));
  run.states.push_back(initial);
  for (const Gate& g : gates) {
    StateVector next = run.states.back();
    apply_fixed_gate(next, run.qubits, g, tol);
    const double drift = std::abs(next.norm() - 1.0);
    if (drift > tol.norm) {
      throw Error(ErrorKind::ToleranceViolation, "norm drift " + format_residual(drift) +
                                                     " after " + describe(g));
    }
    run.states.push_back(std::move(next));
  }
  run.gates = std::move(gates);
  return run;
}

StateVector schrodinger_relative_state(const StateVector& psi, const CMatrix& projector,
                                       const Tolerances& tol) {
  const StateVector projected = projector * psi;
  const double n = projected.norm();
  if (!(n > tol.weight)) {
    throw Error(ErrorKind::ZeroWeightBranch, "projected state has norm " + std::to_string(n));
  }
  return projected.normalized();
}

CMatrix heisenberg_product(const NetworkState& s, const PauliProduct& factors) {
  CMatrix out = CMatrix::identity(s.dim());
  for (const auto& f : factors) out = out * s.component(f.qubit, f.component);
  return out;
}

cplx pauli_expectation(const StateVector& psi, std::size_t n, const PauliProduct& factors) {
  const std::vector<cplx> a_psi = apply_product(psi, n, factors);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a_psi.size(); ++i) s += std::conj(psi[i]) * a_psi[i];
  return s;
}

double pauli_projection_weight(const StateVector& psi, std::size_t n, const PauliProduct& factors,
                               int sign) {
  const std::vector<cplx> a_psi = apply_product(psi, n, factors);
  double w = 0.0;
  for (std::size_t i = 0; i < a_psi.size(); ++i)
    w += std::norm(0.5 * (psi[i] + static_cast<double>(sign) * a_psi[i]));
  return w;
}

CrossValidation cross_validate(const SchrodingerRun& run, std::span<const NetworkState> timeline,
                               const std::vector<PauliProduct>& observables) {
  CrossValidation cv;
  for (const NetworkState& s : timeline) {
    if (s.qubits() != run.qubits || s.time() >= run.states.size()) {
      throw Error(ErrorKind::CircuitMismatch,
                  "network state at t=" + std::to_string(s.time()) + " has no oracle counterpart");
    }
    const StateVector& psi = run.states[s.time()];
    for (std::size_t k = 0; k < observables.size(); ++k) {
      ResidualEntry e;
      e.time = s.time();
      e.observable = k;
      e.heisenberg = expectation(s, heisenberg_product(s, observables[k]));
      e.schrodinger = pauli_expectation(psi, run.qubits, observables[k]);
      e.residual = std::abs(e.heisenberg - e.schrodinger);
      cv.max_residual = std::max(cv.max_residual, e.residual);
      cv.entries.push_back(e);
    }
  }
  return cv;
}

std::map<std::uint32_t, EnsembleMember> register_ensemble(const StateVector& psi, std::size_t n,
                                                          const std::vector<int>& m_qubits,
                                                          const std::vector<int>& s_qubits,
                                                          double weight_tol) {
  auto value = [&](std::size_t i, const std::vector<int>& qs) {
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < qs.size(); ++k)
      v |= static_cast<std::uint32_t>((i >> (n - qs[k])) & 1) << k;
    return v;
  };
  std::map<std::uint32_t, EnsembleMember> out;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const double w = std::norm(psi[i]);
    if (w <= weight_tol) continue;
    const std::uint32_t sv = value(i, s_qubits);
    const std::uint32_t mv = value(i, m_qubits);
    auto [it, fresh] = out.try_emplace(sv, EnsembleMember{mv, 0.0});
    if (!fresh && it->second.m_value != mv) {
      throw Error(ErrorKind::PreconditionFailed,
                  "S value " + std::to_string(sv) + " pairs with several M values");
    }
    it->second.weight += w;
  }
  return out;
}

std::vector<PauliProduct> all_components(std::size_t n) {
  std::vector<PauliProduct> out;
  for (std::size_t a = 1; a <= n; ++a)
    for (Component c : kComponents) out.push_back({PauliFactor{static_cast<int>(a), c}});
  return out;
}

}  // namespace heisenet::oracle
