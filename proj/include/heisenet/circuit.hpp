#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "heisenet/network.hpp"
#include "heisenet/tolerances.hpp"

// Circuit files and run reports for the command-line front end. The file
// schema is described in docs/circuit-format.md.

namespace heisenet {

using Json = nlohmann::ordered_json;

inline constexpr int kCircuitFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

std::string_view version();

struct RecordSpec {
  std::size_t step = 0;
  int qubit = 0;
  Component component = Component::Z;
};

enum class QueryKind { Expectation, Sharpness, Entanglement, Foliate, Autonomy, Classical };

std::string_view query_kind_name(QueryKind k);

struct Query {
  std::string id;
  QueryKind kind = QueryKind::Expectation;
  std::size_t step = 0;
  Json args;  // kind-specific fields, validated by parse_circuit
};

struct CircuitFile {
  int format_version = kCircuitFormatVersion;
  std::string name;
  std::size_t qubits = 0;
  std::vector<Gate> gates;  // gates[k] runs at step k, taking time k to k + 1
  std::vector<RecordSpec> records;
  std::vector<Query> queries;

  std::size_t final_step() const noexcept { return gates.size(); }
};

/// Parses and validates a circuit document. Throws ParseError with line and
/// column for malformed text and ValidationError naming the offending field,
/// including gates that fail validate_gate (F off the unitary family).
CircuitFile parse_circuit(std::string_view text);

/// Canonical document for a parsed file; parse_circuit(dump) round-trips.
Json circuit_to_json(const CircuitFile& file);

struct RunReport {
  Json document;
  int exit_status = 0;
};

/// Evolves the network step by step, takes the record snapshots, answers every
/// query and cross-validates all descriptor expectations against the
/// Schroedinger oracle. Query failures are reported inside the document; the
/// exit status is that of the first failure (queries in file order, then
/// residual summaries), or 0.
RunReport run_circuit(const CircuitFile& file, const Tolerances& tol);

/// Rounds to 12 significant digits and maps -0 to 0, so reports are stable.
Json report_number(double v);

/// Pretty-printed report with a trailing newline.
std::string format_report(const Json& report);

/// Fixed-width table: one line per query and per residual summary.
std::string format_summary(const Json& report);

}  // namespace heisenet
