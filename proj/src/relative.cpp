#include "heisenet/relative.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heisenet/error.hpp"

namespace heisenet {

namespace {

std::string format_label(double v) {
  std::ostringstream os;
  os << std::showpos << v;
  return os.str();
}

RelativeFrame make_frame(const NetworkState& s, CMatrix projector, double label,
                         std::string source) {
  RelativeFrame f;
  f.weight = expectation(s, projector).real();
  f.projector = std::move(projector);
  f.label = label;
  f.source = std::move(source);
  return f;
}

void require_weight(const NetworkState& s, const RelativeFrame& frame) {
  if (!(frame.weight > s.tolerances().weight)) {
    throw Error(ErrorKind::ZeroWeightBranch, "frame " + frame.source + "=" +
                                                 format_label(frame.label) + " has weight " +
                                                 format_residual(frame.weight));
  }
}

}  // namespace

NamedObservable snapshot(const NetworkState& s, const RecordKey& key) {
  return NamedObservable{describe(key), s.record(key)};
}

RelativeFrame identity_frame(const NetworkState& s) {
  return make_frame(s, CMatrix::identity(s.dim()), 1.0, "1");
}

std::vector<RelativeFrame> make_pvm(const NetworkState& s, const NamedObservable& recorded) {
  const Tolerances& tol = s.tolerances();
  const double herm = hermiticity_residual(recorded.matrix);
  if (herm > tol.hermitian) {
    throw Error(ErrorKind::NotHermitian, recorded.name + " is not Hermitian (residual " +
                                             format_residual(herm) + ")");
  }
  std::vector<RelativeFrame> frames;
  if (involution_residual(recorded.matrix) <= tol.general) {
    for (int sign : {+1, -1}) {
      frames.push_back(make_frame(s, pauli_projector(recorded.matrix, sign, tol), sign,
                                  recorded.name));
    }
    return frames;
  }
  SpectralDecomposition sd = spectral(recorded.matrix, tol);
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    frames.push_back(make_frame(s, std::move(sd.projectors[i]), sd.eigenvalues[i], recorded.name));
  }
  return frames;
}

std::vector<RelativeFrame> make_pvm(const NetworkState& s, const RecordKey& key) {
  auto frames = make_pvm(s, snapshot(s, key));
  for (auto& f : frames) f.record = key;
  return frames;
}

double pvm_completeness_residual(const std::vector<RelativeFrame>& frames) {
  if (frames.empty()) return 1.0;
  CMatrix sum(frames.front().projector.dim());
  for (const auto& f : frames) sum += f.projector;
  return distance(sum, CMatrix::identity(sum.dim()));
}

RelativeFrame compose_frames(const NetworkState& s, const RelativeFrame& outer,
                             const RelativeFrame& inner) {
  const double c = commutator(outer.projector, inner.projector).max_abs();
  if (c > s.tolerances().commute) {
    throw Error(ErrorKind::NonCommuting, "frames " + outer.source + " and " + inner.source +
                                             " do not commute (" + format_residual(c) + ")");
  }
  return make_frame(s, outer.projector * inner.projector, inner.label,
                    outer.source + "=" + format_label(outer.label) + " & " + inner.source);
}

double RelativeDescriptor::algebra_residual() const {
  return pauli_algebra_residual(rq[0], rq[1], rq[2], relative_unit);
}

RelativeDescriptor relative_descriptor(const NetworkState& s, int qubit,
                                       const RelativeFrame& frame) {
  const Descriptor& d = s.descriptor(qubit);
  RelativeDescriptor out;
  out.qubit = qubit;
  for (Component c : kComponents) {
    const double comm = commutator(d[c], frame.projector).max_abs();
    if (comm > s.tolerances().commute) {
      throw Error(ErrorKind::NonCommuting,
                  "frame " + frame.source + " does not commute with q" + std::to_string(qubit) +
                      component_name(c) + " (" + format_residual(comm) + ")");
    }
    out.rq[static_cast<std::size_t>(c)] = d[c] * frame.projector;
  }
  out.frame = frame;
  out.relative_unit = frame.projector;
  return out;
}

cplx relative_expectation(const NetworkState& s, const CMatrix& a, const RelativeFrame& frame) {
  require_weight(s, frame);
  if (a.dim() != s.dim()) throw Error(ErrorKind::DimMismatch, "relative expectation");
  return bilinear(s.heisenberg_state(), a, frame.projector) / frame.weight;
}

StateVector relative_heisenberg_state(const NetworkState& s, const RelativeFrame& frame) {
  require_weight(s, frame);
  return (frame.projector * s.heisenberg_state()).normalized();
}

std::vector<RecordHit> record_check(const NetworkState& s, int holder, const CMatrix& recorded) {
  std::vector<RecordHit> hits;
  const Descriptor& d = s.descriptor(holder);
  for (Component c : kComponents) {
    const CMatrix product = d[c] * recorded;
    // A non-commuting pair has a non-Hermitian product and is not an observable.
    if (hermiticity_residual(product) > s.tolerances().hermitian) continue;
    if (auto v = is_sharp(s, product)) hits.push_back(RecordHit{c, *v});
  }
  return hits;
}

AutonomyReport autonomy_check(const NetworkState& s, const Gate& g,
                              const std::vector<NamedObservable>& recorded) {
  const CMatrix u = build_gate_unitary(g, s);
  const double tol = s.tolerances().commute;
  AutonomyReport report;
  for (const auto& r : recorded) {
    const double c = commutator(u, r.matrix).max_abs();
    if (c > report.commutator_norm) report.commutator_norm = c;
    if (c > tol && report.violated.empty()) report.violated = r.name;
  }
  if (report.violated.empty()) {
    report.classification = Autonomy::Preserving;
    report.reason = "commutes-with-records";
    return report;
  }
  // Count qubits whose descriptors the unitary disturbs.
  int touched = 0;
  for (const Descriptor& d : s.descriptors()) {
    for (Component c : kComponents) {
      if (commutator(u, d[c]).max_abs() > tol) {
        ++touched;
        break;
      }
    }
  }
  if (touched <= 1) {
    report.classification = Autonomy::Preserving;
    report.reason = "single-qubit";
  } else {
    report.classification = Autonomy::Destroying;
    report.reason = "breaks-record";
  }
  return report;
}

BranchFactor branch_evolution_factor(const Gate& g, const RelativeFrame& frame,
                                     const NetworkState& s) {
  if (g.kind != GateKind::F) {
    throw Error(ErrorKind::WrongGateKind, "branch factor needs an F gate, got " + describe(g));
  }
  validate_gate(g, s.qubits(), s.tolerances());
  if (!frame.record || frame.record->component != Component::Z) {
    throw Error(ErrorKind::PreconditionFailed, "frame " + frame.source +
                                                   " is not built from a z record");
  }
  const double sign = frame.label > 0 ? 1.0 : -1.0;
  const double alpha = g.params[0], beta = g.params[1], gamma = g.params[2], delta = g.params[3];
  BranchFactor bf;
  if (frame.record->qubit == g.operands[0]) {
    bf.foliated_qubit = g.operands[1];
    bf.unit_coeff = alpha + sign * beta;
    bf.z_coeff = gamma + sign * delta;
  } else if (frame.record->qubit == g.operands[1]) {
    bf.foliated_qubit = g.operands[0];
    bf.unit_coeff = alpha + sign * gamma;
    bf.z_coeff = beta + sign * delta;
  } else {
    throw Error(ErrorKind::PreconditionFailed,
                "frame " + frame.source + " is not a record of an operand of " + describe(g));
  }
  const CMatrix& p = frame.projector;
  const CMatrix rel_z = s.component(bf.foliated_qubit, Component::Z) * p;
  bf.unitary = p * cplx(bf.unit_coeff) + rel_z * cplx(bf.z_coeff);
  return bf;
}

double branch_factor_residual(const Gate& g, const RelativeFrame& frame, const NetworkState& s) {
  const BranchFactor bf = branch_evolution_factor(g, frame, s);
  const CMatrix u = build_gate_unitary(g, s);
  const CMatrix& p = frame.projector;
  double worst = 0.0;
  for (Component c : kComponents) {
    const CMatrix& q = s.component(bf.foliated_qubit, c);
    const CMatrix evolve_then_project = conjugate_prechecked(u, q) * p;
    const CMatrix project_then_evolve = bf.unitary.adjoint() * (q * p) * bf.unitary;
    worst = std::max(worst, distance(evolve_then_project, project_then_evolve));
  }
  return worst;
}

FoliationReport foliate(const NetworkState& s, const std::vector<int>& qubits,
                        const NamedObservable& recorded) {
  FoliationReport report;
  report.frames = make_pvm(s, recorded);
  const auto live = std::count_if(report.frames.begin(), report.frames.end(),
                                  [&](const RelativeFrame& f) {
                                    return f.weight > s.tolerances().weight;
                                  });
  if (live < 2) {
    throw Error(ErrorKind::PreconditionFailed,
                recorded.name + " is sharp; an unentangled system has no relative states");
  }
  report.completeness_residual = pvm_completeness_residual(report.frames);
  report.foliated_qubits = qubits;
  report.descriptors.resize(report.frames.size());
  for (std::size_t f = 0; f < report.frames.size(); ++f) {
    for (int q : qubits) {
      RelativeDescriptor rd = relative_descriptor(s, q, report.frames[f]);
      report.algebra_residual = std::max(report.algebra_residual, rd.algebra_residual());
      report.descriptors[f].push_back(std::move(rd));
    }
  }
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    for (Component c : kComponents) {
      CMatrix sum(s.dim());
      for (std::size_t f = 0; f < report.frames.size(); ++f) sum += report.descriptors[f][k][c];
      report.sum_rule_residual =
          std::max(report.sum_rule_residual, distance(sum, s.component(qubits[k], c)));
    }
  }
  const Tolerances& tol = s.tolerances();
  report.valid = report.completeness_residual <= tol.general &&
                 report.algebra_residual <= 10 * tol.general &&
                 report.sum_rule_residual <= tol.general;
  return report;
}

}  // namespace heisenet
