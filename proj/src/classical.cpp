#include "heisenet/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "heisenet/error.hpp"

namespace heisenet {

namespace {

void check_subset(const NetworkState& s, const std::vector<int>& qubits, const char* what) {
  if (qubits.empty()) throw Error(ErrorKind::BadSubset, std::string(what) + " is empty");
  std::set<int> seen;
  for (int q : qubits) {
    if (q < 1 || static_cast<std::size_t>(q) > s.qubits()) {
      throw Error(ErrorKind::BadSubset, std::string(what) + " qubit " + std::to_string(q) +
                                            " outside 1.." + std::to_string(s.qubits()));
    }
    if (!seen.insert(q).second) {
      throw Error(ErrorKind::BadSubset, std::string(what) + " repeats qubit " + std::to_string(q));
    }
  }
}

void check_disjoint(const std::vector<int>& a, const std::vector<int>& b, const char* what) {
  for (int q : a) {
    if (std::find(b.begin(), b.end(), q) != b.end()) {
      throw Error(ErrorKind::BadSubset, std::string(what) + " share qubit " + std::to_string(q));
    }
  }
}

std::vector<int> bits_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int b = 0; mask != 0; ++b, mask >>= 1)
    if (mask & 1u) out.push_back(b);
  return out;
}

// Multi-controlled NOT over register bit positions, expanded into the
// NOT / CNOT / CCNOT basis.
void emit_mct(std::vector<Gate>& out, const std::vector<int>& controls, int target,
              const std::vector<int>& ancillas) {
  const std::size_t k = controls.size();
  if (k == 0) {
    out.push_back(gates::not_gate(target));
    return;
  }
  if (k == 1) {
    out.push_back(gates::cnot(controls[0], target));
    return;
  }
  if (k == 2) {
    out.push_back(gates::ccnot(controls[0], controls[1], target));
    return;
  }
  if (ancillas.size() < k - 2) {
    throw Error(ErrorKind::PreconditionFailed,
                "a " + std::to_string(k) + "-control Toffoli needs " + std::to_string(k - 2) +
                    " ancilla(s), have " + std::to_string(ancillas.size()));
  }
  std::vector<Gate> ladder;
  ladder.push_back(gates::ccnot(controls[0], controls[1], ancillas[0]));
  for (std::size_t i = 2; i + 1 < k; ++i)
    ladder.push_back(gates::ccnot(controls[i], ancillas[i - 2], ancillas[i - 1]));
  out.insert(out.end(), ladder.begin(), ladder.end());
  out.push_back(gates::ccnot(controls[k - 1], ancillas[k - 3], target));
  out.insert(out.end(), ladder.rbegin(), ladder.rend());
}

}  // namespace

RegisterDescriptor register_descriptor(const NetworkState& s, const std::vector<int>& qubits) {
  check_subset(s, qubits, "register");
  RegisterDescriptor r;
  r.qubits = qubits;
  r.time = s.time();
  r.matrix = CMatrix(s.dim());
  double weight = 1.0;
  for (int q : qubits) {
    r.matrix += pauli_projector(s.component(q, Component::Z), -1, s.tolerances()) * cplx(weight);
    weight *= 2.0;
  }
  return r;
}

ClassicalFunction::ClassicalFunction(std::size_t bits, std::vector<std::uint32_t> table)
    : bits_(bits), table_(std::move(table)) {
  if (bits == 0 || bits > 16) {
    throw Error(ErrorKind::NotReversible, "register width must be within 1..16");
  }
  const std::size_t n = std::size_t{1} << bits;
  if (table_.size() != n) {
    throw Error(ErrorKind::NotReversible, "table has " + std::to_string(table_.size()) +
                                              " entries, expected " + std::to_string(n));
  }
  std::vector<bool> hit(n, false);
  for (std::uint32_t v : table_) {
    if (v >= n || hit[v]) {
      throw Error(ErrorKind::NotReversible, "table is not a permutation (value " +
                                                std::to_string(v) + ")");
    }
    hit[v] = true;
  }
}

ClassicalFunction ClassicalFunction::identity(std::size_t bits) {
  std::vector<std::uint32_t> t(std::size_t{1} << bits);
  for (std::uint32_t v = 0; v < t.size(); ++v) t[v] = v;
  return ClassicalFunction(bits, std::move(t));
}

ClassicalFunction ClassicalFunction::bitwise_not(std::size_t bits) {
  std::vector<std::uint32_t> t(std::size_t{1} << bits);
  const auto mask = static_cast<std::uint32_t>(t.size() - 1);
  for (std::uint32_t v = 0; v < t.size(); ++v) t[v] = v ^ mask;
  return ClassicalFunction(bits, std::move(t));
}

ClassicalFunction ClassicalFunction::increment(std::size_t bits) {
  std::vector<std::uint32_t> t(std::size_t{1} << bits);
  const auto mask = static_cast<std::uint32_t>(t.size() - 1);
  for (std::uint32_t v = 0; v < t.size(); ++v) t[v] = (v + 1) & mask;
  return ClassicalFunction(bits, std::move(t));
}

std::optional<double> sharp_value_in(const StateVector& psi, const CMatrix& a, double tol) {
  const double mean = expectation_value(psi, a).real();
  const double square = bilinear(psi, a, a).real();
  if (std::abs(mean * mean - square) > tol) return std::nullopt;
  return mean;
}

ClassicalBranches classical_branches(const NetworkState& s, const RegisterDescriptor& m_register,
                                     const RegisterDescriptor& s_register) {
  check_disjoint(m_register.qubits, s_register.qubits, "M and S registers");
  const Tolerances& tol = s.tolerances();
  if (auto v = is_sharp(s, s_register.matrix)) {
    throw Error(ErrorKind::PreconditionFailed,
                "b_S is sharp with value " + format_residual(*v) + "; registers are not entangled");
  }
  if (auto v = is_sharp(s, m_register.matrix)) {
    throw Error(ErrorKind::PreconditionFailed,
                "b_M is sharp with value " + format_residual(*v) + "; registers are not entangled");
  }
  ClassicalBranches out;
  out.product_sharpness_residual = sharpness_residual(s, m_register.matrix * s_register.matrix);
  for (RelativeFrame& frame : make_pvm(s, NamedObservable{"b_S", s_register.matrix})) {
    if (!(frame.weight > tol.weight)) continue;
    ClassicalBranch b;
    b.relative_register = m_register.matrix * frame.projector;
    const StateVector psi = relative_heisenberg_state(s, frame);
    auto v = sharp_value_in(psi, b.relative_register, tol.sharp);
    if (!v) {
      throw Error(ErrorKind::PreconditionFailed,
                  "relative register for b_S = " + format_residual(frame.label) + " is not sharp");
    }
    b.value = *v;
    b.frame = std::move(frame);
    out.branches.push_back(std::move(b));
  }
  return out;
}

std::vector<Gate> compile_classical(const ClassicalFunction& f, const std::vector<int>& reg,
                                    const std::vector<int>& ancillas) {
  if (reg.size() != f.bits()) {
    throw Error(ErrorKind::BadSubset, "register has " + std::to_string(reg.size()) +
                                          " qubits, function needs " + std::to_string(f.bits()));
  }
  check_disjoint(reg, ancillas, "register and ancillas");

  // Transformation-based synthesis: walk the table in order and append
  // output-side Toffolis that fix g(i) = i without disturbing smaller entries.
  std::vector<std::uint32_t> g = f.table();
  std::vector<std::pair<std::uint32_t, int>> fixes;  // (control mask, target bit)
  auto apply = [&](std::uint32_t controls, int target) {
    for (auto& v : g)
      if ((v & controls) == controls) v ^= (1u << target);
    fixes.emplace_back(controls, target);
  };
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    if (g[i] == i) continue;
    for (int bit : bits_of(i & ~g[i])) apply(g[i], bit);
    for (int bit : bits_of(g[i] & ~i)) apply(i, bit);
  }

  std::vector<Gate> circuit;
  for (auto it = fixes.rbegin(); it != fixes.rend(); ++it) {
    std::vector<int> controls;
    for (int b : bits_of(it->first)) controls.push_back(reg[static_cast<std::size_t>(b)]);
    emit_mct(circuit, controls, reg[static_cast<std::size_t>(it->second)], ancillas);
  }

  // Exhaustive truth-table check on classical bits.
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < reg.size(); ++k)
      if (x >> k & 1u) bits |= std::uint64_t{1} << (reg[k] - 1);
    const std::uint64_t out = simulate_classically(circuit, bits);
    std::uint32_t y = 0;
    for (std::size_t k = 0; k < reg.size(); ++k)
      if (out >> (reg[k] - 1) & 1u) y |= 1u << k;
    std::uint64_t anc = 0;
    for (int a : ancillas) anc |= out & (std::uint64_t{1} << (a - 1));
    if (y != f(x) || anc != 0) {
      throw Error(ErrorKind::Internal, "synthesised circuit maps " + std::to_string(x) + " to " +
                                           std::to_string(y) + ", expected " +
                                           std::to_string(f(x)));
    }
  }
  return circuit;
}

std::uint64_t simulate_classically(const std::vector<Gate>& gates, std::uint64_t bits) {
  auto bit = [&](int q) { return (bits >> (q - 1)) & 1u; };
  auto flip = [&](int q) { bits ^= std::uint64_t{1} << (q - 1); };
  for (const Gate& g : gates) {
    switch (g.kind) {
      case GateKind::I: break;
      case GateKind::NOT: flip(g.operands[0]); break;
      case GateKind::CNOT:
        if (bit(g.operands[0])) flip(g.operands[1]);
        break;
      case GateKind::CCNOT:
        if (bit(g.operands[0]) && bit(g.operands[1])) flip(g.operands[2]);
        break;
      default:
        throw Error(ErrorKind::WrongGateKind, describe(g) + " is not a classical gate");
    }
  }
  return bits;
}

StepReport verify_classical_step(const NetworkState& before, const NetworkState& after,
                                 const std::vector<int>& m_qubits,
                                 const std::vector<int>& s_qubits, const ClassicalFunction& f,
                                 const std::vector<RelativeFrame>& frames) {
  if (before.qubits() != after.qubits()) {
    throw Error(ErrorKind::CircuitMismatch, "states belong to different networks");
  }
  if (m_qubits.size() != f.bits()) {
    throw Error(ErrorKind::BadSubset, "register width does not match the function");
  }
  check_disjoint(m_qubits, s_qubits, "M and S registers");
  const Tolerances& tol = before.tolerances();
  const RegisterDescriptor b_before = register_descriptor(before, m_qubits);
  const RegisterDescriptor b_after = register_descriptor(after, m_qubits);

  StepReport report;
  for (int q : s_qubits) {
    for (Component c : kComponents) {
      report.interaction_norm = std::max(
          report.interaction_norm, distance(before.component(q, c), after.component(q, c)));
    }
  }
  report.interaction = report.interaction_norm > tol.general;

  bool all_match = true;
  for (const RelativeFrame& frame : frames) {
    if (!(frame.weight > tol.weight)) continue;
    const StateVector psi = relative_heisenberg_state(before, frame);
    BranchStep step;
    step.label = frame.label;
    step.weight = frame.weight;
    auto read = [&](const CMatrix& reg, const char* when) {
      const CMatrix rel = reg * frame.projector;
      auto v = sharp_value_in(psi, rel, tol.sharp);
      if (!v || hermiticity_residual(rel) > tol.hermitian) {
        throw Error(ErrorKind::BranchNotSharp, std::string("branch b_S = ") +
                                                   format_residual(frame.label) +
                                                   ": register not sharp " + when + " the step");
      }
      const double rounded = std::round(*v);
      step.residual = std::max(step.residual, std::abs(*v - rounded));
      return static_cast<std::uint32_t>(rounded);
    };
    step.before = read(b_before.matrix, "before");
    step.after = read(b_after.matrix, "after");
    step.expected = f(step.before);
    step.matches = step.after == step.expected && step.residual <= tol.sharp;
    all_match = all_match && step.matches;
    report.branches.push_back(step);
  }
  report.ok = all_match && !report.interaction;
  return report;
}

}  // namespace heisenet
