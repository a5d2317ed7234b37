#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <sstream>

#include "heisenet/acceptance.hpp"
#include "heisenet/circuit.hpp"
#include "heisenet/error.hpp"
#include "heisenet/oracle.hpp"

using namespace heisenet;

namespace {

std::string read_circuit(const std::string& name) {
  std::ifstream in(std::string(HEISENET_CIRCUITS_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_circuit(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

std::string message_of(const std::string& text) {
  try {
    parse_circuit(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::string with_gates(const std::string& gates, std::size_t qubits = 2) {
  return R"({"format_version": 1, "qubits": )" + std::to_string(qubits) + R"(, "gates": )" + gates +
         R"(, "records": [], "queries": []})";
}

const Json& query(const Json& report, const std::string& id) {
  for (const Json& q : report["queries"])
    if (q["id"] == id) return q;
  throw std::runtime_error("no query " + id);
}

}  // namespace

TEST(CircuitParse, MeasurementCircuitRoundTrips) {
  const CircuitFile c = parse_circuit(acceptance::kMeasurementCircuit);
  EXPECT_EQ(c.qubits, 2u);
  ASSERT_EQ(c.gates.size(), 2u);
  EXPECT_EQ(c.gates[0].kind, GateKind::H);
  EXPECT_EQ(c.gates[1].kind, GateKind::CNOT);
  EXPECT_EQ(c.gates[1].operands, (std::vector<int>{1, 2}));
  ASSERT_EQ(c.records.size(), 2u);
  EXPECT_EQ(c.records[0].step, 2u);
  const Json once = circuit_to_json(c);
  EXPECT_EQ(circuit_to_json(parse_circuit(once.dump())), once);
}

TEST(CircuitParse, ShippedFileMatchesEmbeddedCircuit) {
  EXPECT_EQ(circuit_to_json(parse_circuit(read_circuit("measurement.json"))),
            circuit_to_json(parse_circuit(acceptance::kMeasurementCircuit)));
}

TEST(CircuitParse, RzWithoutAngleIsValidationError) {
  const std::string text = with_gates(R"([{"step": 0, "kind": "RZ", "operands": [1]}])");
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
  EXPECT_NE(message_of(text).find("gates[0]"), std::string::npos);
}

TEST(CircuitParse, UniformHalfFIsValidationError) {
  // Eigenvalues of a + b Z1 + c Z2 + d Z1 Z2 are a + s b + t c + s t d.
  const double h = 0.5;
  int off_circle = 0;
  for (int s : {1, -1})
    for (int t : {1, -1}) off_circle += std::abs(std::abs(h + s * h + t * h + s * t * h) - 1.0) > 1e-10;
  ASSERT_EQ(off_circle, 4);  // 2, 0, 0, 0
  const std::string text =
      with_gates(R"([{"step": 0, "kind": "F", "operands": [1, 2], "params": [0.5, 0.5, 0.5, 0.5]}])");
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
}

TEST(CircuitParse, UnitaryFIsAccepted) {
  // Eigen-signs (+1, +1, +1, -1): a CZ.
  const std::string text =
      with_gates(R"([{"step": 0, "kind": "F", "operands": [1, 2], "params": [0.5, 0.5, 0.5, -0.5]}])");
  EXPECT_EQ(parse_circuit(text).gates.at(0).kind, GateKind::F);
}

TEST(CircuitParse, StepsMustBeConsecutive) {
  const std::string text = with_gates(
      R"([{"step": 0, "kind": "H", "operands": [1]}, {"step": 2, "kind": "H", "operands": [2]}])");
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
  EXPECT_NE(message_of(text).find("gates[1].step"), std::string::npos);
}

TEST(CircuitParse, OperandOutOfRange) {
  EXPECT_EQ(kind_of(with_gates(R"([{"step": 0, "kind": "NOT", "operands": [3]}])")), ErrorKind::ValidationError);
}

TEST(CircuitParse, UnknownFieldIsNamed) {
  const std::string text = with_gates(R"([{"step": 0, "kind": "H", "operands": [1], "angle": 1}])");
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
  EXPECT_NE(message_of(text).find("angle"), std::string::npos);
}

TEST(CircuitParse, UndeclaredRecordIsRejected) {
  const std::string text = R"({"format_version": 1, "qubits": 2,
    "gates": [{"step": 0, "kind": "H", "operands": [1]}],
    "records": [],
    "queries": [{"id": "q", "kind": "expectation", "step": 1, "observable": "q2z",
                 "frame": {"record": "q1z@1", "label": 1}}]})";
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
  EXPECT_NE(message_of(text).find("queries[0].frame.record"), std::string::npos);
}

TEST(CircuitParse, ParseErrorCarriesLocation) {
  const std::string text = "{\n  \"qubits\": 2,\n  \"gates\": [,]\n}";
  EXPECT_EQ(kind_of(text), ErrorKind::ParseError);
  EXPECT_NE(message_of(text).find("line 3"), std::string::npos);
}

TEST(CircuitParse, WrongFormatVersion) {
  EXPECT_EQ(kind_of(R"({"format_version": 7, "qubits": 1, "gates": [], "records": [], "queries": []})"),
            ErrorKind::ValidationError);
}

TEST(CircuitRun, MeasurementQueries) {
  const RunReport r = run_circuit(parse_circuit(acceptance::kMeasurementCircuit), Tolerances{});
  EXPECT_EQ(r.exit_status, 0);
  EXPECT_NEAR(query(r.document, "m_z")["result"]["value"].get<double>(), 0.0, 1e-10);
  EXPECT_NEAR(query(r.document, "m_z_plus")["result"]["value"].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(query(r.document, "m_z_minus")["result"]["value"].get<double>(), -1.0, 1e-10);
  EXPECT_EQ(query(r.document, "bell")["result"]["entangled"], true);
  EXPECT_EQ(r.document["queries"].size(), 6u);
}

TEST(CircuitRun, EmptyQueryListGivesResidualsOnly) {
  const RunReport r = run_circuit(
      parse_circuit(with_gates(R"([{"step": 0, "kind": "H", "operands": [1]}])")), Tolerances{});
  EXPECT_EQ(r.exit_status, 0);
  EXPECT_TRUE(r.document["queries"].empty());
  for (const char* k : {"algebra", "oracle", "pvm_completeness"}) {
    ASSERT_TRUE(r.document["residuals"].contains(k)) << k;
    EXPECT_TRUE(r.document["residuals"][k]["ok"].get<bool>()) << k;
  }
}

TEST(CircuitRun, ClassicalQueryMatchesBruteForce) {
  const CircuitFile c = parse_circuit(read_circuit("classical_ensemble.json"));
  const RunReport r = run_circuit(c, Tolerances{});
  ASSERT_EQ(r.exit_status, 0);

  // Independent ensemble straight from the amplitudes. Qubit q is index bit
  // n - q; register bit k is the k-th listed qubit.
  const std::size_t n = c.qubits;
  const StateVector psi = oracle::evolve(oracle::initial_state(n), c.gates).states.back();
  auto reg = [&](std::size_t index, std::array<int, 2> qs) {
    std::uint32_t v = 0;
    for (int k = 0; k < 2; ++k) v |= static_cast<std::uint32_t>((index >> (n - qs[k])) & 1u) << k;
    return v;
  };
  std::map<std::uint32_t, std::pair<std::uint32_t, double>> ensemble;  // s -> (m, weight)
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const double w = std::norm(psi[i]);
    if (w < 1e-12) continue;
    auto& e = ensemble[reg(i, {3, 4})];
    e.first = reg(i, {1, 2});
    e.second += w;
  }
  ASSERT_EQ(ensemble.size(), 4u);

  const std::map<std::string, std::array<std::uint32_t, 4>> tables{
      {"counter", {1, 2, 3, 0}}, {"flip", {3, 2, 1, 0}}, {"swap_values", {0, 2, 1, 3}}};
  for (const auto& [id, table] : tables) {
    const Json& q = query(r.document, id);
    ASSERT_EQ(q["status"], "ok") << id;
    const Json& branches = q["result"]["branches"];
    ASSERT_EQ(branches.size(), ensemble.size()) << id;
    for (const Json& b : branches) {
      const auto s = b["s_value"].get<std::uint32_t>();
      ASSERT_TRUE(ensemble.count(s)) << id;
      EXPECT_NEAR(b["weight"].get<double>(), ensemble[s].second, 1e-12);
      std::uint32_t v = ensemble[s].first;
      const Json& values = b["values"];
      for (std::size_t k = 0; k < values.size(); ++k) {
        EXPECT_EQ(values[k].get<std::uint32_t>(), v) << id << " s=" << s << " step " << k;
        v = table[v];
      }
    }
    EXPECT_TRUE(q["result"]["matches_classical"].get<bool>()) << id;
  }
}

TEST(CircuitRun, HiddenAngleRecovered) {
  const RunReport r = run_circuit(parse_circuit(read_circuit("hidden_angle.json")), Tolerances{});
  EXPECT_EQ(r.exit_status, 0);
  EXPECT_NEAR(query(r.document, "m_x")["result"]["value"].get<double>(), 0.0, 1e-10);
  EXPECT_NEAR(query(r.document, "s_x_recovered")["result"]["value"].get<double>(), std::cos(0.7), 1e-10);
  EXPECT_NEAR(query(r.document, "s_y_recovered")["result"]["value"].get<double>(), std::sin(0.7), 1e-10);
}

TEST(CircuitRun, PreconditionFailureSetsExitStatus) {
  const std::string text = R"({"format_version": 1, "qubits": 2, "gates": [],
    "records": [{"step": 0, "qubit": 1, "component": "z"}],
    "queries": [{"id": "sharp", "kind": "foliate", "step": 0, "qubits": [2], "record": "q1z@0"},
                {"id": "fine", "kind": "expectation", "step": 0, "observable": "q1z"}]})";
  const RunReport r = run_circuit(parse_circuit(text), Tolerances{});
  EXPECT_EQ(r.exit_status, exit_status(ErrorKind::PreconditionFailed));
  const Json& q = query(r.document, "sharp");
  EXPECT_NE(q["status"], "ok");
  EXPECT_EQ(q["error"]["kind"], "PreconditionFailed");
  EXPECT_EQ(query(r.document, "fine")["status"], "ok");
}

TEST(CircuitRun, OracleToleranceViolationIsReported) {
  Tolerances tol;
  tol.set("oracle", 1e-300);
  const RunReport r = run_circuit(parse_circuit(read_circuit("hidden_angle.json")), tol);
  EXPECT_FALSE(r.document["residuals"]["oracle"]["ok"].get<bool>());
  EXPECT_EQ(r.exit_status, exit_status(ErrorKind::ToleranceViolation));
}

TEST(CircuitRun, EvolutionErrorsPropagate) {
  Tolerances tol;
  tol.set("general", 1e-300);
  try {
    run_circuit(parse_circuit(read_circuit("hidden_angle.json")), tol);
    FAIL() << "expected a numerical error";
  } catch (const Error& e) {
    EXPECT_EQ(exit_status(e.kind()), 2) << e.what();
  }
}

TEST(CircuitRun, ReportsAreByteIdentical) {
  for (const char* name : {"measurement.json", "classical_ensemble.json", "hidden_angle.json"}) {
    const CircuitFile c = parse_circuit(read_circuit(name));
    const std::string a = format_report(run_circuit(c, Tolerances{}).document);
    const std::string b = format_report(run_circuit(c, Tolerances{}).document);
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(format_summary(run_circuit(c, Tolerances{}).document), format_summary(Json::parse(a))) << name;
  }
}

TEST(CircuitRun, NumbersUseTwelveDigits) {
  EXPECT_EQ(report_number(1.0 / 3.0).dump(), "0.333333333333");
  EXPECT_EQ(report_number(-0.0).dump(), "0.0");
}
