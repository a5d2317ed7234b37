#include "heisenet/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "heisenet/classical.hpp"
#include "heisenet/error.hpp"
#include "heisenet/oracle.hpp"
#include "heisenet/relative.hpp"

#ifndef HEISENET_VERSION
#define HEISENET_VERSION "0.0.0"
#endif

namespace heisenet {

std::string_view version() { return HEISENET_VERSION; }

std::string_view query_kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Expectation: return "expectation";
    case QueryKind::Sharpness: return "sharpness";
    case QueryKind::Entanglement: return "entanglement";
    case QueryKind::Foliate: return "foliate";
    case QueryKind::Autonomy: return "autonomy";
    case QueryKind::Classical: return "classical";
  }
  return "?";
}

namespace {

constexpr QueryKind kQueryKinds[] = {QueryKind::Expectation, QueryKind::Sharpness,
                                     QueryKind::Entanglement, QueryKind::Foliate,
                                     QueryKind::Autonomy, QueryKind::Classical};

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ValidationError, field + ": " + what);
}

// ---- typed field access -------------------------------------------------

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(where + "." + key, "missing");
  return *it;
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) invalid(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }))
      invalid(where + "." + it.key(), "unknown field");
  }
}

long long as_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) invalid(where, "expected an integer");
  return v.get<long long>();
}

std::size_t as_step(const Json& v, const std::string& where) {
  const long long s = as_int(v, where);
  if (s < 0) invalid(where, "must be non-negative");
  return static_cast<std::size_t>(s);
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) invalid(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(where, "must be finite");
  return d;
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) invalid(where, "expected a string");
  return v.get<std::string>();
}

int as_qubit(const Json& v, const std::string& where, std::size_t n) {
  const long long q = as_int(v, where);
  if (q < 1 || q > static_cast<long long>(n)) invalid(where, "qubit " + std::to_string(q) + " outside 1.." + std::to_string(n));
  return static_cast<int>(q);
}

std::vector<int> as_qubits(const Json& v, const std::string& where, std::size_t n) {
  if (!v.is_array() || v.empty()) invalid(where, "expected a non-empty list of qubits");
  std::vector<int> out;
  std::set<int> seen;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int q = as_qubit(v[i], where + "[" + std::to_string(i) + "]", n);
    if (!seen.insert(q).second) invalid(where, "qubit " + std::to_string(q) + " repeated");
    out.push_back(q);
  }
  return out;
}

Component as_component(const Json& v, const std::string& where) {
  const std::string s = as_string(v, where);
  if (s != "x" && s != "y" && s != "z") invalid(where, "expected \"x\", \"y\" or \"z\"");
  return parse_component(s);
}

// ---- observables -----------------------------------------------------------
//
// A product of factors joined by '*': "1", "q<k><c>" for a current descriptor
// component, "q<k><c>@<t>" for a record snapshot taken at step t.

struct Factor {
  bool unit = false;
  int qubit = 0;
  Component component = Component::Z;
  std::optional<std::size_t> time;  // set for record snapshots
};

std::optional<RecordKey> parse_record_ref(std::string_view s, std::size_t n) {
  // q<k><c>@<t>
  if (s.size() < 5 || s[0] != 'q') return std::nullopt;
  std::size_t i = 1;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 1 || i + 2 >= s.size() || s[i + 1] != '@') return std::nullopt;
  const char c = s[i];
  if (c != 'x' && c != 'y' && c != 'z') return std::nullopt;
  const std::string digits(s.substr(1, i - 1));
  const std::string tdigits(s.substr(i + 2));
  if (tdigits.empty() || !std::all_of(tdigits.begin(), tdigits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    return std::nullopt;
  if (digits.size() > 3 || tdigits.size() > 9) return std::nullopt;
  const int q = std::stoi(digits);
  if (q < 1 || static_cast<std::size_t>(q) > n) return std::nullopt;
  return RecordKey{q, parse_component(std::string(1, c)), static_cast<std::size_t>(std::stoul(tdigits))};
}

std::vector<Factor> parse_observable(const std::string& text, const std::string& where, std::size_t n) {
  std::vector<Factor> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t star = text.find('*', start);
    std::string tok = text.substr(start, star == std::string::npos ? std::string::npos : star - start);
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }), tok.end());
    Factor f;
    if (tok == "1") {
      f.unit = true;
    } else if (auto key = parse_record_ref(tok, n)) {
      f.qubit = key->qubit;
      f.component = key->component;
      f.time = key->time;
    } else {
      // q<k><c>
      bool ok = tok.size() >= 3 && tok[0] == 'q';
      std::size_t i = 1;
      while (ok && i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
      ok = ok && i > 1 && i + 1 == tok.size() && i <= 4 && (tok[i] == 'x' || tok[i] == 'y' || tok[i] == 'z');
      if (!ok) invalid(where, "cannot read factor '" + tok + "' (expected 1, q<k><c> or q<k><c>@<t>)");
      f.qubit = std::stoi(tok.substr(1, i - 1));
      if (f.qubit < 1 || static_cast<std::size_t>(f.qubit) > n)
        invalid(where, "factor '" + tok + "' names a qubit outside 1.." + std::to_string(n));
      f.component = parse_component(std::string(1, tok[i]));
    }
    out.push_back(f);
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return out;
}

bool record_taken(const CircuitFile& c, const RecordKey& key) {
  return std::any_of(c.records.begin(), c.records.end(), [&](const RecordSpec& r) {
    return r.step == key.time && r.qubit == key.qubit && r.component == key.component;
  });
}

void check_record_ref(const CircuitFile& c, const RecordKey& key, std::size_t step, const std::string& where) {
  if (!record_taken(c, key)) invalid(where, "no record " + describe(key) + " is declared");
  if (key.time > step) invalid(where, "record " + describe(key) + " is taken after the query step");
}

RecordKey as_record(const Json& v, const CircuitFile& c, std::size_t step, const std::string& where) {
  const std::string s = as_string(v, where);
  auto key = parse_record_ref(s, c.qubits);
  if (!key) invalid(where, "expected a record reference q<k><c>@<t>");
  check_record_ref(c, *key, step, where);
  return *key;
}

// ---- gates -----------------------------------------------------------------

Gate parse_gate(const Json& g, const std::string& where, std::size_t n, bool with_step) {
  if (with_step) {
    check_keys(g, where, {"step", "kind", "operands", "params"});
  } else {
    check_keys(g, where, {"kind", "operands", "params"});
  }
  const std::string kind_name = as_string(require(g, "kind", where), where + ".kind");
  Gate gate;
  try {
    gate.kind = parse_gate_kind(kind_name);
  } catch (const Error&) {
    invalid(where + ".kind", "unknown gate kind '" + kind_name + "'");
  }
  if (gate.kind == GateKind::CUSTOM) invalid(where + ".kind", "CUSTOM gates cannot be expressed in circuit files");
  if (auto it = g.find("operands"); it != g.end()) {
    if (!it->is_array()) invalid(where + ".operands", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i)
      gate.operands.push_back(as_qubit((*it)[i], where + ".operands[" + std::to_string(i) + "]", n));
  }
  if (auto it = g.find("params"); it != g.end()) {
    if (!it->is_array()) invalid(where + ".params", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i)
      gate.params.push_back(as_number((*it)[i], where + ".params[" + std::to_string(i) + "]"));
  }
  Tolerances tol;
  try {
    validate_gate(gate, n, tol);
  } catch (const Error& e) {
    invalid(where, e.what());
  }
  return gate;
}

Json gate_to_json(const Gate& g) {
  Json j;
  j["kind"] = std::string(gate_kind_name(g.kind));
  j["operands"] = g.operands;
  if (!g.params.empty()) j["params"] = g.params;
  return j;
}

// ---- classical functions ------------------------------------------------------

ClassicalFunction as_function(const Json& v, std::size_t bits, const std::string& where) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "identity") return ClassicalFunction::identity(bits);
    if (s == "not") return ClassicalFunction::bitwise_not(bits);
    if (s == "increment") return ClassicalFunction::increment(bits);
    invalid(where, "unknown function '" + s + "' (identity, not, increment or a table)");
  }
  if (!v.is_array()) invalid(where, "expected a function name or a permutation table");
  std::vector<std::uint32_t> table;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long long x = as_int(v[i], where + "[" + std::to_string(i) + "]");
    if (x < 0) invalid(where, "table entries must be non-negative");
    table.push_back(static_cast<std::uint32_t>(x));
  }
  try {
    return ClassicalFunction(bits, std::move(table));
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + std::string(e.what()));
  }
}

// ---- queries ------------------------------------------------------------------

void validate_query(const CircuitFile& c, Query& q, const std::string& where) {
  const Json& a = q.args;
  const std::size_t n = c.qubits;
  switch (q.kind) {
    case QueryKind::Expectation: {
      check_keys(a, where, {"id", "kind", "step", "observable", "frame"});
      const auto fs = parse_observable(as_string(require(a, "observable", where), where + ".observable"),
                                       where + ".observable", n);
      for (const Factor& f : fs)
        if (f.time) check_record_ref(c, RecordKey{f.qubit, f.component, *f.time}, q.step, where + ".observable");
      if (auto it = a.find("frame"); it != a.end()) {
        check_keys(*it, where + ".frame", {"record", "label"});
        as_record(require(*it, "record", where + ".frame"), c, q.step, where + ".frame.record");
        const long long label = as_int(require(*it, "label", where + ".frame"), where + ".frame.label");
        if (label != 1 && label != -1) invalid(where + ".frame.label", "expected 1 or -1");
      }
      break;
    }
    case QueryKind::Sharpness: {
      check_keys(a, where, {"id", "kind", "step", "observable"});
      const auto fs = parse_observable(as_string(require(a, "observable", where), where + ".observable"),
                                       where + ".observable", n);
      for (const Factor& f : fs)
        if (f.time) check_record_ref(c, RecordKey{f.qubit, f.component, *f.time}, q.step, where + ".observable");
      break;
    }
    case QueryKind::Entanglement: {
      check_keys(a, where, {"id", "kind", "step", "qubits"});
      const auto qs = as_qubits(require(a, "qubits", where), where + ".qubits", n);
      if (qs.size() != 2) invalid(where + ".qubits", "expected exactly two qubits");
      break;
    }
    case QueryKind::Foliate: {
      check_keys(a, where, {"id", "kind", "step", "qubits", "record"});
      as_qubits(require(a, "qubits", where), where + ".qubits", n);
      as_record(require(a, "record", where), c, q.step, where + ".record");
      break;
    }
    case QueryKind::Autonomy: {
      check_keys(a, where, {"id", "kind", "step", "gate", "records"});
      parse_gate(require(a, "gate", where), where + ".gate", n, false);
      if (auto it = a.find("records"); it != a.end()) {
        if (!it->is_array() || it->empty()) invalid(where + ".records", "expected a non-empty list");
        for (std::size_t i = 0; i < it->size(); ++i)
          as_record((*it)[i], c, q.step, where + ".records[" + std::to_string(i) + "]");
      }
      break;
    }
    case QueryKind::Classical: {
      check_keys(a, where, {"id", "kind", "step", "m", "s", "function", "steps", "ancillas"});
      const auto m = as_qubits(require(a, "m", where), where + ".m", n);
      const auto s = as_qubits(require(a, "s", where), where + ".s", n);
      std::set<int> used(m.begin(), m.end());
      for (int x : s)
        if (!used.insert(x).second) invalid(where + ".s", "overlaps m");
      if (auto it = a.find("ancillas"); it != a.end() && !it->empty()) {
        for (int x : as_qubits(*it, where + ".ancillas", n))
          if (!used.insert(x).second) invalid(where + ".ancillas", "overlaps m or s");
      }
      if (m.size() > 4) invalid(where + ".m", "registers are limited to 4 bits");
      as_function(require(a, "function", where), m.size(), where + ".function");
      if (auto it = a.find("steps"); it != a.end()) {
        const long long k = as_int(*it, where + ".steps");
        if (k < 1 || k > 64) invalid(where + ".steps", "expected 1..64");
      }
      break;
    }
  }
}

}  // namespace

// ---- parsing --------------------------------------------------------------------

CircuitFile parse_circuit(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find(": ", msg.find("parse error")); p != std::string::npos) msg = msg.substr(p + 2);
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }

  check_keys(doc, "circuit", {"format_version", "name", "qubits", "gates", "records", "queries"});
  CircuitFile c;
  c.format_version = static_cast<int>(as_int(require(doc, "format_version", "circuit"), "format_version"));
  if (c.format_version != kCircuitFormatVersion)
    invalid("format_version", "unsupported version " + std::to_string(c.format_version));
  if (auto it = doc.find("name"); it != doc.end()) c.name = as_string(*it, "name");
  const long long n = as_int(require(doc, "qubits", "circuit"), "qubits");
  if (n < 1 || n > static_cast<long long>(kMaxQubits)) {
    throw Error(ErrorKind::SizeLimit, "qubits: " + std::to_string(n) + " outside 1.." + std::to_string(kMaxQubits));
  }
  c.qubits = static_cast<std::size_t>(n);

  if (auto it = doc.find("gates"); it != doc.end()) {
    if (!it->is_array()) invalid("gates", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "gates[" + std::to_string(i) + "]";
      const Json& g = (*it)[i];
      Gate gate = parse_gate(g, where, c.qubits, true);
      const std::size_t step = as_step(require(g, "step", where), where + ".step");
      if (step != i) invalid(where + ".step", "expected step " + std::to_string(i) + " (steps are consecutive from 0)");
      c.gates.push_back(std::move(gate));
    }
  }

  if (auto it = doc.find("records"); it != doc.end()) {
    if (!it->is_array()) invalid("records", "expected a list");
    std::set<RecordKey> seen;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "records[" + std::to_string(i) + "]";
      const Json& r = (*it)[i];
      check_keys(r, where, {"step", "qubit", "component"});
      RecordSpec spec;
      spec.step = as_step(require(r, "step", where), where + ".step");
      if (spec.step > c.final_step())
        invalid(where + ".step", "after the last step " + std::to_string(c.final_step()));
      spec.qubit = as_qubit(require(r, "qubit", where), where + ".qubit", c.qubits);
      spec.component = as_component(require(r, "component", where), where + ".component");
      if (!seen.insert(RecordKey{spec.qubit, spec.component, spec.step}).second)
        invalid(where, "duplicate record");
      c.records.push_back(spec);
    }
  }

  if (auto it = doc.find("queries"); it != doc.end()) {
    if (!it->is_array()) invalid("queries", "expected a list");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "queries[" + std::to_string(i) + "]";
      const Json& qj = (*it)[i];
      if (!qj.is_object()) invalid(where, "expected an object");
      Query q;
      const std::string kind = as_string(require(qj, "kind", where), where + ".kind");
      const auto* k = std::find_if(std::begin(kQueryKinds), std::end(kQueryKinds),
                                   [&](QueryKind x) { return query_kind_name(x) == kind; });
      if (k == std::end(kQueryKinds)) invalid(where + ".kind", "unknown query kind '" + kind + "'");
      q.kind = *k;
      q.id = qj.contains("id") ? as_string(qj["id"], where + ".id") : "q" + std::to_string(i);
      if (!ids.insert(q.id).second) invalid(where + ".id", "duplicate id '" + q.id + "'");
      q.step = qj.contains("step") ? as_step(qj["step"], where + ".step") : c.final_step();
      if (q.step > c.final_step()) invalid(where + ".step", "after the last step " + std::to_string(c.final_step()));
      q.args = qj;
      validate_query(c, q, where);
      q.args.erase("id");
      q.args.erase("kind");
      q.args.erase("step");
      c.queries.push_back(std::move(q));
    }
  }
  return c;
}

Json circuit_to_json(const CircuitFile& c) {
  Json doc;
  doc["format_version"] = c.format_version;
  if (!c.name.empty()) doc["name"] = c.name;
  doc["qubits"] = c.qubits;
  doc["gates"] = Json::array();
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    Json g;
    g["step"] = k;
    const Json body = gate_to_json(c.gates[k]);
    for (const auto& [key, val] : body.items()) g[key] = val;
    doc["gates"].push_back(g);
  }
  doc["records"] = Json::array();
  for (const RecordSpec& r : c.records) {
    doc["records"].push_back(Json{{"step", r.step}, {"qubit", r.qubit}, {"component", std::string(1, component_name(r.component))}});
  }
  doc["queries"] = Json::array();
  for (const Query& q : c.queries) {
    Json j;
    j["id"] = q.id;
    j["kind"] = std::string(query_kind_name(q.kind));
    j["step"] = q.step;
    for (const auto& [key, val] : q.args.items()) j[key] = val;
    doc["queries"].push_back(j);
  }
  return doc;
}

// ---- running ----------------------------------------------------------------------

Json report_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // drops the sign of -0
  return r;
}

namespace {

Json num(double v) { return report_number(v); }

Json component_triple(const std::array<double, 3>& v) { return Json::array({num(v[0]), num(v[1]), num(v[2])}); }

std::string key_name(const RecordKey& k) { return describe(k); }

struct RunContext {
  const CircuitFile& file;
  const NetworkState& state;
  const StateVector& psi;  // Schroedinger state at the same step
  const Tolerances& tol;
};

CMatrix build_observable(const NetworkState& s, const std::vector<Factor>& fs) {
  CMatrix m = CMatrix::identity(s.dim());
  for (const Factor& f : fs) {
    if (f.unit) continue;
    const CMatrix& term = f.time ? s.record(RecordKey{f.qubit, f.component, *f.time}) : s.component(f.qubit, f.component);
    m = m * term;
  }
  return m;
}

// Oracle check is possible when every factor is a current descriptor.
std::optional<oracle::PauliProduct> current_product(const std::vector<Factor>& fs) {
  oracle::PauliProduct p;
  for (const Factor& f : fs) {
    if (f.unit) continue;
    if (f.time) return std::nullopt;
    p.push_back({f.qubit, f.component});
  }
  return p;
}

RelativeFrame frame_for(const NetworkState& s, const RecordKey& key, int label) {
  for (RelativeFrame& f : make_pvm(s, key))
    if (static_cast<int>(f.label) == label) return f;
  throw Error(ErrorKind::Internal, "record " + describe(key) + " has no frame " + std::to_string(label));
}

Json run_expectation(const RunContext& ctx, const Query& q) {
  const auto fs = parse_observable(q.args["observable"].get<std::string>(), "observable", ctx.file.qubits);
  const CMatrix a = build_observable(ctx.state, fs);
  Json r;
  if (auto it = q.args.find("frame"); it != q.args.end()) {
    const auto key = parse_record_ref((*it)["record"].get<std::string>(), ctx.file.qubits);
    const RelativeFrame f = frame_for(ctx.state, *key, (*it)["label"].get<int>());
    const cplx v = relative_expectation(ctx.state, a, f);
    r["value"] = num(v.real());
    r["imag"] = num(v.imag());
    r["frame_weight"] = num(f.weight);
    return r;
  }
  const cplx v = expectation(ctx.state, a);
  r["value"] = num(v.real());
  r["imag"] = num(v.imag());
  if (auto p = current_product(fs)) {
    const cplx o = oracle::pauli_expectation(ctx.psi, ctx.file.qubits, *p);
    const double res = std::abs(v - o);
    r["oracle"] = num(o.real());
    r["oracle_residual"] = num(res);
    if (res > ctx.tol.oracle) {
      throw Error(ErrorKind::ToleranceViolation, "Heisenberg and Schroedinger expectations differ by " + format_residual(res));
    }
  }
  return r;
}

Json run_sharpness(const RunContext& ctx, const Query& q) {
  const auto fs = parse_observable(q.args["observable"].get<std::string>(), "observable", ctx.file.qubits);
  const CMatrix a = build_observable(ctx.state, fs);
  const auto v = is_sharp(ctx.state, a);
  Json r;
  r["sharp"] = v.has_value();
  r["value"] = v ? num(*v) : Json(nullptr);
  r["expectation"] = num(expectation(ctx.state, a).real());
  r["residual"] = num(sharpness_residual(ctx.state, a));
  return r;
}

Json run_entanglement(const RunContext& ctx, const Query& q) {
  const int a = q.args["qubits"][0].get<int>();
  const int b = q.args["qubits"][1].get<int>();
  const EntanglementWitness w = are_entangled(ctx.state, a, b);
  Json r;
  r["entangled"] = w.entangled;
  r["witness"] = std::string{component_name(w.first), component_name(w.second)};
  r["discrepancy"] = num(w.discrepancy);
  return r;
}

Json run_foliate(const RunContext& ctx, const Query& q) {
  const auto qubits = q.args["qubits"].get<std::vector<int>>();
  const auto key = parse_record_ref(q.args["record"].get<std::string>(), ctx.file.qubits);
  const FoliationReport rep = foliate(ctx.state, qubits, snapshot(ctx.state, *key));
  Json r;
  r["valid"] = rep.valid;
  r["foliated_qubits"] = rep.foliated_qubits;
  r["frames"] = Json::array();
  for (std::size_t f = 0; f < rep.frames.size(); ++f) {
    const RelativeFrame& fr = rep.frames[f];
    Json jf;
    jf["label"] = num(fr.label);
    jf["weight"] = num(fr.weight);
    jf["relative_expectations"] = Json::object();
    for (std::size_t k = 0; k < rep.foliated_qubits.size(); ++k) {
      const int qubit = rep.foliated_qubits[k];
      std::array<double, 3> v{};
      if (fr.weight > ctx.tol.weight) {
        for (Component c : kComponents)
          v[static_cast<std::size_t>(c)] = relative_expectation(ctx.state, ctx.state.component(qubit, c), fr).real();
        jf["relative_expectations"]["q" + std::to_string(qubit)] = component_triple(v);
      } else {
        jf["relative_expectations"]["q" + std::to_string(qubit)] = nullptr;
      }
    }
    r["frames"].push_back(jf);
  }
  r["completeness_residual"] = num(rep.completeness_residual);
  r["algebra_residual"] = num(rep.algebra_residual);
  r["sum_rule_residual"] = num(rep.sum_rule_residual);
  return r;
}

Json run_autonomy(const RunContext& ctx, const Query& q) {
  const Gate g = parse_gate(q.args["gate"], "gate", ctx.file.qubits, false);
  std::vector<RecordKey> keys;
  if (auto it = q.args.find("records"); it != q.args.end()) {
    for (const auto& s : *it) keys.push_back(*parse_record_ref(s.get<std::string>(), ctx.file.qubits));
  } else {
    keys = ctx.state.record_keys();
  }
  if (keys.empty()) throw Error(ErrorKind::PreconditionFailed, "no records taken before this step");
  std::vector<NamedObservable> recs;
  for (const RecordKey& k : keys) recs.push_back(snapshot(ctx.state, k));
  const AutonomyReport rep = autonomy_check(ctx.state, g, recs);
  Json r;
  r["gate"] = describe(g);
  r["classification"] = rep.classification == Autonomy::Preserving ? "PRESERVING" : "DESTROYING";
  r["reason"] = rep.reason;
  r["violated"] = rep.violated.empty() ? Json(nullptr) : Json(rep.violated);
  r["commutator_norm"] = num(rep.commutator_norm);
  r["records"] = Json::array();
  for (const RecordKey& k : keys) r["records"].push_back(key_name(k));
  if (g.kind == GateKind::F) {
    // Branch factors for every z record of an F operand.
    Json branches = Json::array();
    for (const RecordKey& k : keys) {
      if (k.component != Component::Z || std::find(g.operands.begin(), g.operands.end(), k.qubit) == g.operands.end()) continue;
      for (const RelativeFrame& f : make_pvm(ctx.state, k)) {
        if (!(f.weight > ctx.tol.weight)) continue;
        const BranchFactor bf = branch_evolution_factor(g, f, ctx.state);
        Json jb;
        jb["record"] = key_name(k);
        jb["label"] = num(f.label);
        jb["foliated_qubit"] = bf.foliated_qubit;
        jb["unit_coeff"] = num(bf.unit_coeff);
        jb["z_coeff"] = num(bf.z_coeff);
        const double res = branch_factor_residual(g, f, ctx.state);
        jb["residual"] = num(res);
        if (res > ctx.tol.commute) {
          throw Error(ErrorKind::ToleranceViolation, "branch factor residual " + format_residual(res));
        }
        branches.push_back(jb);
      }
    }
    r["branch_factors"] = branches;
  }
  return r;
}

Json run_classical(const RunContext& ctx, const Query& q, int& failure) {
  const auto m = q.args["m"].get<std::vector<int>>();
  const auto s = q.args["s"].get<std::vector<int>>();
  std::vector<int> anc;
  if (auto it = q.args.find("ancillas"); it != q.args.end()) anc = it->get<std::vector<int>>();
  const ClassicalFunction f = as_function(q.args["function"], m.size(), "function");
  const long long steps = q.args.value("steps", 1LL);
  const NetworkState& st = ctx.state;

  const RegisterDescriptor bm = register_descriptor(st, m);
  const RegisterDescriptor bs = register_descriptor(st, s);
  const ClassicalBranches cb = classical_branches(st, bm, bs);
  for (int a : anc) {
    const auto v = is_sharp(st, register_descriptor(st, {a}).matrix);
    if (!v || std::abs(*v) > ctx.tol.sharp) {
      throw Error(ErrorKind::PreconditionFailed, "ancilla " + std::to_string(a) + " is not sharp at 0");
    }
  }
  const std::vector<RelativeFrame> frames = make_pvm(st, NamedObservable{"b_S", bs.matrix});
  const std::vector<Gate> program = compile_classical(f, m, anc);

  std::map<long, std::vector<std::uint32_t>> values;
  std::map<long, double> weights;
  for (const ClassicalBranch& b : cb.branches) {
    values[std::lround(b.frame.label)].push_back(static_cast<std::uint32_t>(std::lround(b.value)));
    weights[std::lround(b.frame.label)] = b.frame.weight;
  }
  bool interaction = false;
  double worst = 0.0;
  NetworkState cur = st;
  for (long long k = 0; k < steps; ++k) {
    NetworkState next = apply_gates(cur, program);
    const StepReport rep = verify_classical_step(cur, next, m, s, f, frames);
    interaction = interaction || rep.interaction;
    for (const BranchStep& b : rep.branches) {
      values[std::lround(b.label)].push_back(b.after);
      worst = std::max(worst, b.residual);
    }
    cur = std::move(next);
  }

  // Independent check: read the ensemble off the Schroedinger amplitudes and
  // iterate f on plain integers.
  const auto brute = oracle::register_ensemble(ctx.psi, ctx.file.qubits, m, s, ctx.tol.weight);
  bool matches = brute.size() == values.size();
  Json r;
  r["gates"] = Json::array();
  for (const Gate& g : program) r["gates"].push_back(describe(g));
  r["branches"] = Json::array();
  for (const auto& [label, seq] : values) {
    Json jb;
    jb["s_value"] = label;
    jb["weight"] = num(weights[label]);
    jb["values"] = seq;
    std::vector<std::uint32_t> expect;
    if (auto it = brute.find(static_cast<std::uint32_t>(label)); it != brute.end()) {
      std::uint32_t v = it->second.m_value;
      expect.push_back(v);
      for (long long k = 0; k < steps; ++k) expect.push_back(v = f(v));
      if (std::abs(it->second.weight - weights[label]) > ctx.tol.oracle) matches = false;
    }
    jb["classical"] = expect;
    matches = matches && expect == seq;
    r["branches"].push_back(jb);
  }
  r["matches_classical"] = matches;
  r["interaction"] = interaction;
  r["sharpness_residual"] = num(worst);
  r["product_sharpness_residual"] = num(cb.product_sharpness_residual);
  if (!matches || interaction) failure = exit_status(ErrorKind::ToleranceViolation);
  return r;
}

struct Summary {
  double worst = 0.0;
  double limit = 0.0;
  Json to_json() const {
    Json j;
    j["max"] = num(worst);
    j["limit"] = num(limit);
    j["ok"] = worst <= limit;
    return j;
  }
};

}  // namespace

RunReport run_circuit(const CircuitFile& file, const Tolerances& tol) {
  RunReport out;
  Json& doc = out.document;
  doc["report_format_version"] = kReportFormatVersion;
  doc["generator"] = "heisenet " + std::string(version());
  if (!file.name.empty()) doc["circuit"] = file.name;
  doc["qubits"] = file.qubits;
  doc["steps"] = file.final_step();
  doc["tolerances"] = Json::object();
  for (const auto& [name, value] : tol.entries()) doc["tolerances"][name] = num(value);

  std::vector<Json> results(file.queries.size());
  std::vector<int> status(file.queries.size(), 0);

  Summary algebra{0.0, tol.general}, oracle_sum{0.0, tol.oracle}, pvm{0.0, tol.general};
  std::vector<oracle::PauliProduct> observables = oracle::all_components(file.qubits);

  NetworkState s = init_network(file.qubits, tol);
  StateVector psi = oracle::initial_state(file.qubits);
  for (std::size_t t = 0; t <= file.final_step(); ++t) {
    if (t > 0) {
      s = apply_gate(s, file.gates[t - 1]);
      oracle::apply_fixed_gate(psi, file.qubits, file.gates[t - 1], tol);
    }
    for (const RecordSpec& r : file.records) {
      if (r.step != t) continue;
      s = s.with_record(r.qubit, r.component);
      const auto frames = make_pvm(s, RecordKey{r.qubit, r.component, t});
      pvm.worst = std::max(pvm.worst, pvm_completeness_residual(frames));
    }
    algebra.worst = std::max(algebra.worst, algebra_residual(s));
    for (const auto& p : observables) {
      const cplx h = expectation(s, oracle::heisenberg_product(s, p));
      const cplx o = oracle::pauli_expectation(psi, file.qubits, p);
      oracle_sum.worst = std::max(oracle_sum.worst, std::abs(h - o));
    }

    const RunContext ctx{file, s, psi, tol};
    for (std::size_t i = 0; i < file.queries.size(); ++i) {
      const Query& q = file.queries[i];
      if (q.step != t) continue;
      Json res;
      res["id"] = q.id;
      res["kind"] = std::string(query_kind_name(q.kind));
      res["step"] = q.step;
      try {
        int failure = 0;
        Json body;
        switch (q.kind) {
          case QueryKind::Expectation: body = run_expectation(ctx, q); break;
          case QueryKind::Sharpness: body = run_sharpness(ctx, q); break;
          case QueryKind::Entanglement: body = run_entanglement(ctx, q); break;
          case QueryKind::Foliate: body = run_foliate(ctx, q); break;
          case QueryKind::Autonomy: body = run_autonomy(ctx, q); break;
          case QueryKind::Classical: body = run_classical(ctx, q, failure); break;
        }
        res["status"] = failure == 0 ? "ok" : "failed";
        res["result"] = std::move(body);
        status[i] = failure;
      } catch (const Error& e) {
        res["status"] = "error";
        res["error"] = Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        status[i] = exit_status(e.kind());
      }
      results[i] = std::move(res);
    }
  }

  doc["queries"] = Json::array();
  for (auto& r : results) doc["queries"].push_back(std::move(r));
  doc["residuals"] = Json::object();
  doc["residuals"]["algebra"] = algebra.to_json();
  doc["residuals"]["oracle"] = oracle_sum.to_json();
  doc["residuals"]["pvm_completeness"] = pvm.to_json();

  for (int st : status) {
    if (st != 0) {
      out.exit_status = st;
      break;
    }
  }
  if (out.exit_status == 0) {
    for (const Summary* sm : {&algebra, &oracle_sum, &pvm})
      if (sm->worst > sm->limit) {
        out.exit_status = exit_status(ErrorKind::ToleranceViolation);
        break;
      }
  }
  doc["exit_status"] = out.exit_status;
  return out;
}

std::string format_report(const Json& report) { return report.dump(2) + "\n"; }

namespace {

std::string headline(const Json& q) {
  if (q["status"] == "error") return q["error"]["message"].get<std::string>();
  const Json& r = q["result"];
  const std::string kind = q["kind"].get<std::string>();
  std::ostringstream os;
  if (kind == "expectation") {
    os << "value " << r["value"].dump();
    if (r.contains("frame_weight")) os << " (frame weight " << r["frame_weight"].dump() << ")";
  } else if (kind == "sharpness") {
    os << (r["sharp"].get<bool>() ? "sharp, value " + r["value"].dump() : "not sharp");
  } else if (kind == "entanglement") {
    os << (r["entangled"].get<bool>() ? "entangled, witness " + r["witness"].get<std::string>() : "not entangled")
       << ", discrepancy " << r["discrepancy"].dump();
  } else if (kind == "foliate") {
    os << r["frames"].size() << " frames, weights";
    for (const auto& f : r["frames"]) os << " " << f["weight"].dump();
  } else if (kind == "autonomy") {
    os << r["classification"].get<std::string>() << " (" << r["reason"].get<std::string>() << ")";
  } else if (kind == "classical") {
    os << r["branches"].size() << " branches, " << (r["matches_classical"].get<bool>() ? "match" : "MISMATCH");
    if (r["interaction"].get<bool>()) os << ", interaction";
  }
  return os.str();
}

}  // namespace

std::string format_summary(const Json& report) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-16s %-13s %4s  %-6s  %s\n", "query", "kind", "step", "status", "result");
  os << line;
  for (const auto& q : report["queries"]) {
    std::snprintf(line, sizeof line, "%-16s %-13s %4s  %-6s  %s\n", q["id"].get<std::string>().c_str(),
                  q["kind"].get<std::string>().c_str(), q["step"].dump().c_str(),
                  q["status"].get<std::string>().c_str(), headline(q).c_str());
    os << line;
  }
  os << "\n";
  for (const auto& [name, r] : report["residuals"].items()) {
    std::snprintf(line, sizeof line, "%-16s max %-19s limit %-8s %s\n", name.c_str(), r["max"].dump().c_str(),
                  r["limit"].dump().c_str(), r["ok"].get<bool>() ? "ok" : "VIOLATED");
    os << line;
  }
  os << "exit status " << report["exit_status"].dump() << "\n";
  return os.str();
}

}  // namespace heisenet
