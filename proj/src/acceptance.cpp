#include "heisenet/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "heisenet/circuit.hpp"
#include "heisenet/classical.hpp"
#include "heisenet/error.hpp"
#include "heisenet/fixtures.hpp"
#include "heisenet/oracle.hpp"
#include "heisenet/relative.hpp"

namespace heisenet::acceptance {

const char* const kMeasurementCircuit = R"({
  "format_version": 1,
  "name": "measurement",
  "qubits": 2,
  "gates": [
    {"step": 0, "kind": "H", "operands": [1]},
    {"step": 1, "kind": "CNOT", "operands": [1, 2]}
  ],
  "records": [
    {"step": 2, "qubit": 1, "component": "z"},
    {"step": 2, "qubit": 2, "component": "z"}
  ],
  "queries": [
    {"id": "m_z", "kind": "expectation", "step": 2, "observable": "q2z"},
    {"id": "m_z_plus", "kind": "expectation", "step": 2, "observable": "q2z",
     "frame": {"record": "q1z@2", "label": 1}},
    {"id": "m_z_minus", "kind": "expectation", "step": 2, "observable": "q2z",
     "frame": {"record": "q1z@2", "label": -1}},
    {"id": "record_copy", "kind": "sharpness", "step": 2, "observable": "q2z*q1z@2"},
    {"id": "bell", "kind": "entanglement", "step": 2, "qubits": [1, 2]},
    {"id": "branches", "kind": "foliate", "step": 2, "qubits": [2], "record": "q1z@2"}
  ]
}
)";

namespace {

using fixtures::Rng;
constexpr double kPi = std::numbers::pi;
constexpr int S = fixtures::kSystem;
constexpr int M = fixtures::kMeasurer;
const RecordKey kSz{S, Component::Z, 2};
const RecordKey kMz{M, Component::Z, 2};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Tracks the worst deviation against a bound and the first failure message.
struct Check {
  bool ok = true;
  std::string why;

  void bound(double value, double limit, const std::string& what) {
    if (!(value <= limit)) fail(what + " = " + fmt(value) + " > " + fmt(limit));
  }
  void require(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
  void fail(const std::string& what) {
    if (ok) why = what;
    ok = false;
  }
};

CriterionResult finish(int id, std::string name, const Check& c, const std::string& detail) {
  return CriterionResult{id, std::move(name), c.ok, c.ok ? detail : c.why};
}

// Runs `body`, turning an unexpected library error into a failed criterion.
CriterionResult guarded(int id, const std::string& name, const std::function<CriterionResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return CriterionResult{id, name, false, std::string("unexpected error: ") + e.what()};
  }
}

double expect_re(const NetworkState& s, const CMatrix& a) { return expectation(s, a).real(); }

CriterionResult algebra_conservation(std::uint64_t seed) {
  Rng rng(seed ^ 0x01);
  Check c;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 3;
    std::uniform_int_distribution<std::size_t> depth(1, 50);
    const auto gs = fixtures::random_circuit(rng, n, i < 50 ? 50 : depth(rng), fixtures::GateSet::Standard);
    const NetworkState s = apply_gates(init_network(n), gs);
    worst = std::max(worst, algebra_residual(s));
  }
  c.bound(worst, 1e-8, "max algebra residual");
  return finish(1, "algebra conservation", c, "100 circuits, max residual " + fmt(worst));
}

CriterionResult measurement_fixture() {
  Check c;
  const NetworkState s = fixtures::measured_network();
  const CMatrix& I = pauli::identity2();
  const CMatrix &X = pauli::x(), &Y = pauli::y(), &Z = pauli::z();
  // Descriptors at t = 2 in terms of the initial Paulis (S left, M right).
  const std::array<std::array<CMatrix, 3>, 2> expected{{
      {tensor(Z, X), -tensor(Y, X), tensor(X, I)},
      {tensor(I, X), tensor(X, Y), tensor(X, Z)},
  }};
  double worst = 0.0;
  for (int q = 1; q <= 2; ++q)
    for (Component k : kComponents)
      worst = std::max(worst, distance(s.component(q, k), expected[q - 1][static_cast<std::size_t>(k)]));
  c.bound(worst, 1e-10, "descriptor error");

  const auto run = oracle::evolve(oracle::initial_state(2), fixtures::measurement_circuit());
  const StateVector& psi = run.states.back();
  const double h = 1.0 / std::numbers::sqrt2;
  const StateVector bell({h, 0.0, 0.0, h});
  const cplx overlap = inner(bell, psi);
  const cplx phase = overlap / std::abs(overlap);
  double state_err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) state_err = std::max(state_err, std::abs(psi[i] / phase - bell[i]));
  c.bound(state_err, 1e-10, "oracle state error");
  return finish(2, "measurement fixture exactness", c,
                "descriptor error " + fmt(worst) + ", state error " + fmt(state_err));
}

CriterionResult relative_values() {
  Check c;
  const NetworkState s = fixtures::measured_network();
  const CMatrix& mz = s.component(M, Component::Z);
  const double abs_v = expect_re(s, mz);
  c.bound(std::abs(abs_v), 1e-10, "|<q_Mz>|");
  const auto frames = make_pvm(s, kSz);
  c.require(frames.size() == 2, "expected two frames");
  double worst = std::abs(abs_v);
  for (const RelativeFrame& f : frames) {
    const cplx v = relative_expectation(s, mz, f);
    const double err = std::abs(v - cplx(f.label));
    c.bound(err, 1e-10, "relative <q_Mz> error in frame " + fmt(f.label));
    c.bound(std::abs(f.weight - 0.5), 1e-10, "frame weight error");
    worst = std::max({worst, err, std::abs(f.weight - 0.5)});
  }
  return finish(3, "relative-state values", c, "max deviation " + fmt(worst));
}

CriterionResult relative_algebra() {
  Check c;
  const NetworkState s = fixtures::measured_network();
  double alg = 0.0, sum = 0.0;
  for (const auto& [qubit, key] : {std::pair{M, kSz}, std::pair{S, kMz}}) {
    const FoliationReport r = foliate(s, {qubit}, snapshot(s, key));
    c.require(r.valid, "foliation of qubit " + std::to_string(qubit) + " invalid");
    alg = std::max(alg, r.algebra_residual);
    sum = std::max(sum, r.sum_rule_residual);
  }
  c.bound(alg, 1e-9, "relative algebra residual");
  c.bound(sum, 1e-10, "sum rule residual");
  return finish(4, "relative Pauli algebra", c, "algebra residual " + fmt(alg) + ", sum rule " + fmt(sum));
}

CriterionResult hidden_information() {
  Check c;
  double abs_worst = 0.0, rel_worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    const NetworkState s = fixtures::bell_rz_network(2 * kPi * k / 16);
    for (int q = 1; q <= 2; ++q)
      for (Component comp : kComponents) abs_worst = std::max(abs_worst, std::abs(expectation(s, s.component(q, comp))));
    for (const RelativeFrame& f : make_pvm(s, kSz)) {
      const std::array<double, 3> want{0.0, 0.0, f.label};
      for (Component comp : kComponents) {
        const cplx v = relative_expectation(s, s.component(M, comp), f);
        rel_worst = std::max(rel_worst, std::abs(v - want[static_cast<std::size_t>(comp)]));
      }
    }
  }
  c.bound(abs_worst, 1e-10, "max |absolute expectation|");
  c.bound(rel_worst, 1e-10, "max relative expectation error");

  const NetworkState a = fixtures::bell_rz_network(0.0);
  const NetworkState b = fixtures::bell_rz_network(kPi / 2);
  double dist = 0.0;
  for (Component comp : kComponents) dist = std::max(dist, distance(a.component(M, comp), b.component(M, comp)));
  c.require(dist > 0.1, "descriptors at theta = 0 and pi/2 differ by only " + fmt(dist));

  // A second CNOT moves the phase onto qubit 1's x component.
  double range = 0.0, picture_err = 0.0;
  for (int q = 1; q <= 2; ++q) {
    for (Component comp : kComponents) {
      double lo = 1e9, hi = -1e9;
      for (int k = 0; k < 16; ++k) {
        const double theta = 2 * kPi * k / 16;
        const std::vector<Gate> gs{gates::hadamard(1), gates::cnot(1, 2), gates::rz(2, theta), gates::cnot(1, 2)};
        const StateVector psi = oracle::evolve(oracle::initial_state(2), gs).states.back();
        const double v = oracle::pauli_expectation(psi, 2, {{q, comp}}).real();
        const NetworkState s = apply_gates(init_network(2), gs);
        picture_err = std::max(picture_err, std::abs(expect_re(s, s.component(q, comp)) - v));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      range = std::max(range, hi - lo);
    }
  }
  c.require(range > 0.5, "recovered theta dependence range only " + fmt(range));
  c.bound(picture_err, 1e-9, "Heisenberg/oracle disagreement after the second CNOT");
  return finish(5, "locally inaccessible information", c,
                "abs " + fmt(abs_worst) + ", rel " + fmt(rel_worst) + ", descriptor distance " + fmt(dist) +
                    ", recovered range " + fmt(range));
}

CriterionResult autonomy(std::uint64_t seed) {
  Rng rng(seed ^ 0x06);
  Check c;
  const NetworkState s = fixtures::measured_network();
  const std::vector<NamedObservable> recs{snapshot(s, kSz), snapshot(s, kMz)};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Gate g = i % 2 ? fixtures::random_f_gate(rng, M, S) : fixtures::random_f_gate(rng, S, M);
    const AutonomyReport r = autonomy_check(s, g, recs);
    c.require(r.classification == Autonomy::Preserving, describe(g) + " classified DESTROYING");
    for (const RecordKey& key : {kSz, kMz})
      for (const RelativeFrame& f : make_pvm(s, key)) worst = std::max(worst, branch_factor_residual(g, f, s));
  }
  c.bound(worst, 1e-9, "branch factor residual");
  c.require(autonomy_check(s, gates::cnot(S, M), recs).classification == Autonomy::Destroying,
            "second CNOT classified PRESERVING");
  int rotations = 0;
  for (int i = 0; i < 20; ++i) {
    const Gate g = fixtures::random_rotation(rng, i % 2 ? M : S);
    const bool ok = autonomy_check(s, g, recs).classification == Autonomy::Preserving;
    c.require(ok, "rotation " + describe(g) + " classified DESTROYING");
    rotations += ok;
  }
  return finish(6, "autonomy classification", c,
                "20 F gates preserving, branch residual " + fmt(worst) + ", second CNOT destroying, " +
                    std::to_string(rotations) + "/20 rotations preserving");
}

CriterionResult picture_equivalence(std::uint64_t seed) {
  Rng rng(seed ^ 0x07);
  Check c;
  double exp_worst = 0.0, weight_worst = 0.0;
  std::uniform_int_distribution<std::size_t> depth_dist(1, 20);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + i % 3;
    const auto gs = fixtures::random_circuit(rng, n, depth_dist(rng), fixtures::GateSet::WithF);
    const auto run = oracle::evolve(oracle::initial_state(n), gs);
    NetworkState s = init_network(n);
    for (std::size_t t = 0; t <= gs.size(); ++t) {
      if (t > 0) s = apply_gate(s, gs[t - 1]);
      const StateVector& psi = run.states[t];
      for (int q = 1; q <= static_cast<int>(n); ++q) {
        for (Component comp : kComponents) {
          const cplx o = oracle::pauli_expectation(psi, n, {{q, comp}});
          exp_worst = std::max(exp_worst, std::abs(expectation(s, s.component(q, comp)) - o));
        }
        const NetworkState r = s.with_record(q, Component::Z);
        for (const RelativeFrame& f : make_pvm(r, RecordKey{q, Component::Z, t})) {
          const double w = oracle::pauli_projection_weight(psi, n, {{q, Component::Z}}, static_cast<int>(f.label));
          weight_worst = std::max(weight_worst, std::abs(w - f.weight));
        }
      }
    }
  }
  c.bound(exp_worst, 1e-9, "max expectation residual");
  c.bound(weight_worst, 1e-9, "max branch weight residual");
  return finish(7, "picture equivalence", c,
                "200 circuits, expectation residual " + fmt(exp_worst) + ", weight residual " + fmt(weight_worst));
}

struct Ensemble {
  std::string name;
  std::size_t n;
  std::vector<int> m, s;
  std::vector<Gate> prep;
};

CriterionResult quasi_classical() {
  Check c;
  const std::vector<Ensemble> ensembles{
      {"1-bit", 2, {1}, {2}, {gates::hadamard(2), gates::cnot(2, 1)}},
      {"2-bit/4", 4, {1, 2}, {3, 4}, {gates::hadamard(3), gates::hadamard(4), gates::cnot(3, 1), gates::cnot(4, 2)}},
      {"2-bit/2", 4, {1, 2}, {3, 4}, {gates::hadamard(3), gates::cnot(3, 4), gates::cnot(3, 1), gates::not_gate(2)}},
  };
  int runs = 0, flagged = 0;
  for (const Ensemble& e : ensembles) {
    const NetworkState s0 = apply_gates(init_network(e.n), e.prep);
    const auto brute = oracle::register_ensemble(oracle::evolve(oracle::initial_state(e.n), e.prep).states.back(),
                                                 e.n, e.m, e.s, 1e-12);
    const auto bs = register_descriptor(s0, e.s);
    const auto frames = make_pvm(s0, NamedObservable{"b_S", bs.matrix});
    classical_branches(s0, register_descriptor(s0, e.m), bs);

    std::vector<ClassicalFunction> fs{ClassicalFunction::bitwise_not(e.m.size()), ClassicalFunction::identity(e.m.size())};
    if (e.m.size() == 2) fs.push_back(ClassicalFunction::increment(2));
    for (const ClassicalFunction& f : fs) {
      const auto program = compile_classical(f, e.m, {});
      std::map<long, std::uint32_t> classical;
      for (const auto& [sv, member] : brute) classical[sv] = member.m_value;
      NetworkState cur = s0;
      for (int step = 0; step < 4; ++step) {
        const NetworkState next = apply_gates(cur, program);
        const StepReport r = verify_classical_step(cur, next, e.m, e.s, f, frames);
        c.require(r.ok, e.name + " step " + std::to_string(step) + " not a clean classical step");
        c.require(r.branches.size() == classical.size(), e.name + " branch count differs from the amplitudes");
        for (const BranchStep& b : r.branches) {
          const long label = std::lround(b.label);
          auto it = classical.find(label);
          if (it == classical.end()) {
            c.fail(e.name + " branch " + std::to_string(label) + " absent classically");
            continue;
          }
          c.require(b.before == it->second, e.name + " branch value before step differs");
          it->second = f(it->second);
          c.require(b.after == it->second, e.name + " branch value after step differs");
        }
        cur = next;
      }
      ++runs;
    }

    // Crossing the M/S boundary must not pass as a classical step.
    const Gate cross = gates::cnot(e.s[0], e.m[0]);
    try {
      const StepReport r = verify_classical_step(s0, apply_gate(s0, cross), e.m, e.s,
                                                 ClassicalFunction::identity(e.m.size()), frames);
      c.require(r.interaction && !r.ok, e.name + ": cross-boundary CNOT not detected");
      flagged += r.interaction;
    } catch (const Error& err) {
      c.require(err.kind() == ErrorKind::BranchNotSharp, e.name + ": unexpected " + err.what());
      ++flagged;
    }
  }
  return finish(8, "quasi-classical ensemble", c,
                std::to_string(runs) + " function runs of 4 steps match, " + std::to_string(flagged) +
                    "/3 boundary CNOTs flagged");
}

CriterionResult guards() {
  Check c;
  const NetworkState fresh = init_network(2).with_record(1, Component::Z);
  const RecordKey key{1, Component::Z, 0};
  try {
    foliate(fresh, {2}, snapshot(fresh, key));
    c.fail("foliating a sharp record succeeded");
  } catch (const Error& e) {
    c.require(e.kind() == ErrorKind::PreconditionFailed, std::string("wrong error: ") + e.what());
  }
  const auto frames = make_pvm(fresh, key);
  const RelativeFrame& empty = frames[1];
  c.require(empty.weight == 0.0, "expected an empty frame");
  try {
    const cplx v = relative_expectation(fresh, fresh.component(2, Component::Z), empty);
    c.fail(std::isnan(v.real()) ? "zero-weight frame produced NaN" : "zero-weight frame produced a value");
  } catch (const Error& e) {
    c.require(e.kind() == ErrorKind::ZeroWeightBranch, std::string("wrong error: ") + e.what());
  }
  try {
    relative_heisenberg_state(fresh, empty);
    c.fail("zero-weight relative state produced a vector");
  } catch (const Error& e) {
    c.require(e.kind() == ErrorKind::ZeroWeightBranch, std::string("wrong error: ") + e.what());
  }
  return finish(9, "zero-weight and degenerate guards", c, "PreconditionFailed and ZeroWeightBranch raised");
}

}  // namespace

std::vector<CriterionResult> run_checks(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(guarded(1, "algebra conservation", [&] { return algebra_conservation(seed); }));
  out.push_back(guarded(2, "measurement fixture exactness", [] { return measurement_fixture(); }));
  out.push_back(guarded(3, "relative-state values", [] { return relative_values(); }));
  out.push_back(guarded(4, "relative Pauli algebra", [] { return relative_algebra(); }));
  out.push_back(guarded(5, "locally inaccessible information", [] { return hidden_information(); }));
  out.push_back(guarded(6, "autonomy classification", [&] { return autonomy(seed); }));
  out.push_back(guarded(7, "picture equivalence", [&] { return picture_equivalence(seed); }));
  out.push_back(guarded(8, "quasi-classical ensemble", [] { return quasi_classical(); }));
  out.push_back(guarded(9, "zero-weight and degenerate guards", [] { return guards(); }));
  return out;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out = run_checks(seed);
  out.push_back(guarded(10, "determinism", [&] {
    Check c;
    c.require(all_passed(out), "criteria 1-9 did not all pass");
    const std::string first = format_results(out);
    const std::string second = format_results(run_checks(seed));
    c.require(first == second, "repeated checks differ");
    const CircuitFile file = parse_circuit(kMeasurementCircuit);
    const RunReport a = run_circuit(file, Tolerances{});
    const RunReport b = run_circuit(parse_circuit(circuit_to_json(file).dump()), Tolerances{});
    c.require(a.exit_status == 0, "reference circuit exit status " + std::to_string(a.exit_status));
    c.require(format_report(a.document) == format_report(b.document), "reference reports differ");
    return finish(10, "determinism", c, "repeated checks and reference report byte-identical");
  }));
  return out;
}

std::string format_results(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.detail << "\n";
  }
  return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

}  // namespace heisenet::acceptance
