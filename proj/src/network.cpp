#include "heisenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "heisenet/error.hpp"

namespace heisenet {

char component_name(Component c) {
  switch (c) {
    case Component::X: return 'x';
    case Component::Y: return 'y';
    case Component::Z: return 'z';
  }
  return '?';
}

Component parse_component(std::string_view s) {
  if (s == "x") return Component::X;
  if (s == "y") return Component::Y;
  if (s == "z") return Component::Z;
  throw Error(ErrorKind::ValidationError, "component must be x, y or z, got '" +
                                              std::string(s) + "'");
}

double pauli_algebra_residual(const CMatrix& qx, const CMatrix& qy, const CMatrix& qz,
                              const CMatrix& unit) {
  const std::array<const CMatrix*, 3> q{&qx, &qy, &qz};
  const cplx i_unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CMatrix expected = (i == j) ? unit : CMatrix(unit.dim());
      if (i != j) {
        const std::size_t k = 3 - i - j;
        // eps_ijk = +1 for cyclic (i, j, k)
        const double eps = ((j + 3 - i) % 3 == 1) ? 1.0 : -1.0;
        expected += (*q[k]) * (i_unit * eps);
      }
      worst = std::max(worst, distance((*q[i]) * (*q[j]), expected));
    }
  }
  return worst;
}

std::string_view gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::NOT: return "NOT";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::RZ: return "RZ";
    case GateKind::F: return "F";
    case GateKind::CCNOT: return "CCNOT";
    case GateKind::CUSTOM: return "CUSTOM";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : {GateKind::I, GateKind::NOT, GateKind::H, GateKind::CNOT, GateKind::RZ,
                     GateKind::F, GateKind::CCNOT, GateKind::CUSTOM}) {
    if (gate_kind_name(k) == name) return k;
  }
  throw Error(ErrorKind::ValidationError, "unknown gate kind '" + std::string(name) + "'");
}

namespace gates {

Gate identity() { return Gate{GateKind::I, {}, {}, {}, {}}; }
Gate not_gate(int target) { return Gate{GateKind::NOT, {target}, {}, {}, {}}; }
Gate hadamard(int target) { return Gate{GateKind::H, {target}, {}, {}, {}}; }
Gate cnot(int control, int target) { return Gate{GateKind::CNOT, {control, target}, {}, {}, {}}; }
Gate rz(int target, double theta) { return Gate{GateKind::RZ, {target}, {theta}, {}, {}}; }

Gate f_gate(int a, int b, double alpha, double beta, double gamma, double delta) {
  return Gate{GateKind::F, {a, b}, {alpha, beta, gamma, delta}, {}, {}};
}

Gate ccnot(int control1, int control2, int target) {
  return Gate{GateKind::CCNOT, {control1, control2, target}, {}, {}, {}};
}

Gate custom(std::string name, std::vector<int> operands, Gate::Builder builder) {
  return Gate{GateKind::CUSTOM, std::move(operands), {}, std::move(builder), std::move(name)};
}

Gate rotation(int target, double nx, double ny, double nz, double theta) {
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  nx /= len;
  ny /= len;
  nz /= len;
  std::ostringstream name;
  name << "ROT(" << nx << "," << ny << "," << nz << ";" << theta << ")";
  auto builder = [=](std::span<const Descriptor> d) {
    const Descriptor& q = d[static_cast<std::size_t>(target - 1)];
    CMatrix axis = q.x() * cplx(nx) + q.y() * cplx(ny) + q.z() * cplx(nz);
    return CMatrix::identity(q.x().dim()) * cplx(std::cos(theta / 2)) +
           axis * cplx(0.0, -std::sin(theta / 2));
  };
  Gate g = custom(name.str(), {target}, builder);
  g.params = {nx, ny, nz, theta};
  return g;
}

}  // namespace gates

std::array<double, 4> f_gate_eigenvalues(const Gate& g) {
  if (g.kind != GateKind::F || g.params.size() != 4) {
    throw Error(ErrorKind::WrongGateKind, "expected an F gate with four coefficients");
  }
  const double a = g.params[0], b = g.params[1], c = g.params[2], d = g.params[3];
  return {a + b + c + d, a + b - c - d, a - b + c - d, a - b - c + d};
}

void validate_gate(const Gate& g, std::size_t n, const Tolerances& tol) {
  std::size_t expected_operands = 0;
  std::size_t expected_params = 0;
  switch (g.kind) {
    case GateKind::I: break;
    case GateKind::NOT:
    case GateKind::H: expected_operands = 1; break;
    case GateKind::RZ: expected_operands = 1; expected_params = 1; break;
    case GateKind::CNOT: expected_operands = 2; break;
    case GateKind::F: expected_operands = 2; expected_params = 4; break;
    case GateKind::CCNOT: expected_operands = 3; break;
    case GateKind::CUSTOM:
      if (!g.custom) throw Error(ErrorKind::ValidationError, "CUSTOM gate without a builder");
      expected_operands = g.operands.size();
      expected_params = g.params.size();
      break;
  }
  const std::string kind(gate_kind_name(g.kind));
  if (g.operands.size() != expected_operands) {
    throw Error(ErrorKind::ValidationError, kind + " takes " +
                                                std::to_string(expected_operands) +
                                                " operand(s), got " +
                                                std::to_string(g.operands.size()));
  }
  if (g.params.size() != expected_params) {
    throw Error(ErrorKind::ValidationError, kind + " takes " + std::to_string(expected_params) +
                                                " parameter(s), got " +
                                                std::to_string(g.params.size()));
  }
  std::set<int> seen;
  for (int q : g.operands) {
    if (q < 1 || static_cast<std::size_t>(q) > n) {
      throw Error(ErrorKind::ValidationError, kind + " operand " + std::to_string(q) +
                                                  " outside 1.." + std::to_string(n));
    }
    if (!seen.insert(q).second) {
      throw Error(ErrorKind::ValidationError, kind + " operands must be distinct");
    }
  }
  for (double p : g.params) {
    if (!std::isfinite(p)) throw Error(ErrorKind::ValidationError, kind + " parameter not finite");
  }
  if (g.kind == GateKind::F) {
    for (double v : f_gate_eigenvalues(g)) {
      if (std::abs(std::abs(v) - 1.0) > tol.unitary) {
        throw Error(ErrorKind::NonUnitary,
                    "F coefficients give eigenvalue " + format_residual(v) + " with modulus != 1");
      }
    }
  }
}

std::string describe(const Gate& g) {
  std::ostringstream os;
  os << (g.kind == GateKind::CUSTOM && !g.name.empty() ? g.name
                                                        : std::string(gate_kind_name(g.kind)));
  os << "(";
  for (std::size_t i = 0; i < g.operands.size(); ++i) os << (i ? "," : "") << g.operands[i];
  if (g.kind != GateKind::CUSTOM && !g.params.empty()) {
    os << ";";
    for (std::size_t i = 0; i < g.params.size(); ++i) os << (i ? "," : "") << g.params[i];
  }
  os << ")";
  return os.str();
}

std::string describe(const RecordKey& key) {
  return "q" + std::to_string(key.qubit) + component_name(key.component) + "@" +
         std::to_string(key.time);
}

const Descriptor& NetworkState::descriptor(int qubit) const {
  if (qubit < 1 || static_cast<std::size_t>(qubit) > qubits()) {
    throw Error(ErrorKind::ValidationError, "qubit " + std::to_string(qubit) + " outside 1.." +
                                                std::to_string(qubits()));
  }
  return descriptors_[static_cast<std::size_t>(qubit - 1)];
}

NetworkState NetworkState::with_record(int qubit, Component c) const {
  NetworkState out = *this;
  out.records_[RecordKey{qubit, c, time_}] = std::make_shared<const CMatrix>(component(qubit, c));
  return out;
}

const CMatrix& NetworkState::record(const RecordKey& key) const {
  auto it = records_.find(key);
  if (it == records_.end()) {
    throw Error(ErrorKind::ValidationError, "no record snapshot " + describe(key));
  }
  return *it->second;
}

std::vector<RecordKey> NetworkState::record_keys() const {
  std::vector<RecordKey> keys;
  for (const auto& [k, _] : records_) keys.push_back(k);
  return keys;
}

NetworkState init_network(std::size_t n, const Tolerances& tol) {
  if (n < 1 || n > kMaxQubits) {
    throw Error(ErrorKind::SizeLimit, "network size " + std::to_string(n) + " outside 1.." +
                                          std::to_string(kMaxQubits));
  }
  NetworkState s;
  s.tol_ = tol;
  const std::array<const CMatrix*, 3> sigma{&pauli::x(), &pauli::y(), &pauli::z()};
  for (std::size_t a = 1; a <= n; ++a) {
    Descriptor d;
    d.qubit = static_cast<int>(a);
    const CMatrix left = CMatrix::identity(std::size_t{1} << (a - 1));
    const CMatrix right = CMatrix::identity(std::size_t{1} << (n - a));
    for (std::size_t c = 0; c < 3; ++c) d.q[c] = tensor(tensor(left, *sigma[c]), right);
    s.descriptors_.push_back(std::move(d));
  }
  s.psi_ = std::make_shared<const StateVector>(StateVector::basis(std::size_t{1} << n, 0));
  return s;
}

CMatrix restore_unitarity(CMatrix u) {
  // Newton-Schulz step towards the nearest unitary: u <- u (3 - u^H u) / 2.
  // Without it a slightly non-unitary gate amplifies the descriptors' rounding
  // error at every step and deep circuits diverge.
  const CMatrix three = CMatrix::identity(u.dim()) * cplx(3.0);
  for (int step = 0; step < 3; ++step) {
    if (unitarity_residual(u) <= kUnitarityFloor) break;
    u = u * ((three - u.adjoint() * u) * cplx(0.5));
  }
  return u;
}

CMatrix build_gate_unitary(const Gate& g, const NetworkState& s) {
  const Tolerances& tol = s.tolerances();
  validate_gate(g, s.qubits(), tol);
  const std::size_t dim = s.dim();
  const CMatrix one = CMatrix::identity(dim);
  auto op = [&](std::size_t i) { return g.operands[i]; };

  CMatrix u;
  switch (g.kind) {
    case GateKind::I:
      u = one;
      break;
    case GateKind::NOT:
      u = s.component(op(0), Component::X);
      break;
    case GateKind::H:
      u = (s.component(op(0), Component::X) + s.component(op(0), Component::Z)) *
          cplx(1.0 / std::numbers::sqrt2);
      break;
    case GateKind::RZ: {
      const double half = g.params[0] / 2;
      u = one * cplx(std::cos(half)) + s.component(op(0), Component::Z) * cplx(0.0, -std::sin(half));
      break;
    }
    case GateKind::CNOT: {
      const CMatrix& cz = s.component(op(0), Component::Z);
      u = pauli_projector(cz, +1, tol) + s.component(op(1), Component::X) * pauli_projector(cz, -1, tol);
      break;
    }
    case GateKind::CCNOT: {
      const CMatrix both = pauli_projector(s.component(op(0), Component::Z), -1, tol) *
                           pauli_projector(s.component(op(1), Component::Z), -1, tol);
      u = one - both + s.component(op(2), Component::X) * both;
      break;
    }
    case GateKind::F: {
      const CMatrix& az = s.component(op(0), Component::Z);
      const CMatrix& bz = s.component(op(1), Component::Z);
      u = one * cplx(g.params[0]) + az * cplx(g.params[1]) + bz * cplx(g.params[2]) +
          (az * bz) * cplx(g.params[3]);
      break;
    }
    case GateKind::CUSTOM:
      u = g.custom(s.descriptors());
      if (u.dim() != dim) {
        throw Error(ErrorKind::DimMismatch, "custom gate '" + g.name + "' built a " +
                                                std::to_string(u.dim()) + "-dim unitary");
      }
      break;
  }
  const double r = unitarity_residual(u);
  if (r > tol.unitary) {
    throw Error(ErrorKind::NonUnitary, describe(g) + ": ||u^H u - 1|| = " + format_residual(r));
  }
  return restore_unitarity(std::move(u));
}

NetworkState apply_gate(const NetworkState& s, const Gate& g) {
  const CMatrix u = build_gate_unitary(g, s);
  NetworkState out = s;
  out.time_ = s.time_ + 1;
  for (auto& d : out.descriptors_) {
    for (auto& m : d.q) m = conjugate_prechecked(u, m);
    d.time = out.time_;
  }
  return out;
}

NetworkState apply_gates(NetworkState s, std::span<const Gate> gs) {
  for (const Gate& g : gs) s = apply_gate(s, g);
  return s;
}

cplx expectation(const NetworkState& s, const CMatrix& a) {
  if (a.dim() != s.dim()) {
    throw Error(ErrorKind::DimMismatch, "observable dimension " + std::to_string(a.dim()) +
                                            " vs network dimension " + std::to_string(s.dim()));
  }
  return expectation_value(s.heisenberg_state(), a);
}

double sharpness_residual(const NetworkState& s, const CMatrix& a) {
  const double mean = expectation(s, a).real();
  const double square = bilinear(s.heisenberg_state(), a, a).real();
  return std::abs(mean * mean - square);
}

std::optional<double> is_sharp(const NetworkState& s, const CMatrix& a) {
  const double herm = hermiticity_residual(a);
  if (herm > s.tolerances().hermitian) {
    throw Error(ErrorKind::NotHermitian, "sharpness of a non-Hermitian observable (residual " +
                                             format_residual(herm) + ")");
  }
  if (sharpness_residual(s, a) > s.tolerances().sharp) return std::nullopt;
  return expectation(s, a).real();
}

EntanglementWitness are_entangled(const NetworkState& s, int a, int b) {
  if (a == b) throw Error(ErrorKind::ValidationError, "entanglement needs two distinct qubits");
  const Descriptor& da = s.descriptor(a);
  const Descriptor& db = s.descriptor(b);
  const StateVector& psi = s.heisenberg_state();
  EntanglementWitness w;
  // z pairs first; a later pair only wins by a margin above tol.entangle, so
  // ties resolve to the computational-basis witness.
  constexpr std::array<Component, 3> order{Component::Z, Component::X, Component::Y};
  bool first = true;
  for (Component i : order) {
    for (Component j : order) {
      const cplx joint = bilinear(psi, da[i], db[j]);
      const cplx product = expectation(s, da[i]) * expectation(s, db[j]);
      const double gap = std::abs(joint - product);
      if (first || gap > w.discrepancy + s.tolerances().entangle) {
        first = false;
        w.discrepancy = gap;
        w.first = i;
        w.second = j;
      }
    }
  }
  w.entangled = w.discrepancy > s.tolerances().entangle;
  return w;
}

double algebra_residual(const NetworkState& s) {
  const CMatrix one = CMatrix::identity(s.dim());
  double worst = 0.0;
  const auto ds = s.descriptors();
  for (std::size_t a = 0; a < ds.size(); ++a) {
    worst = std::max(worst, pauli_algebra_residual(ds[a].x(), ds[a].y(), ds[a].z(), one));
    for (std::size_t b = a + 1; b < ds.size(); ++b)
      for (Component i : kComponents)
        for (Component j : kComponents)
          worst = std::max(worst, commutator(ds[a][i], ds[b][j]).max_abs());
  }
  return worst;
}

}  // namespace heisenet
