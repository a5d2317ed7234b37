#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heisenet/acceptance.hpp"
#include "heisenet/circuit.hpp"
#include "heisenet/error.hpp"

namespace {

using namespace heisenet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ValidationError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Tolerances parse_overrides(const std::vector<std::string>& items) {
  Tolerances tol;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ValidationError, "--tol expects name=value, got '" + item + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ValidationError, "--tol " + item.substr(0, eq) + ": not a number");
    }
    tol.set(item.substr(0, eq), value);
  }
  return tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-picture quantum network simulator"};
  app.set_version_flag("--version", std::string(heisenet::version()));
  app.require_subcommand(1);

  std::string path;
  bool summary = false;
  std::vector<std::string> tol_items;
  std::uint64_t seed = acceptance::kDefaultSeed;

  auto* run = app.add_subcommand("run", "Simulate a circuit file and print its report");
  run->add_option("file", path, "Circuit file")->required();
  run->add_flag("--summary", summary, "Print a table instead of the JSON report");
  run->add_option("--tol", tol_items, "Override a tolerance, name=value (repeatable)");

  auto* validate = app.add_subcommand("validate", "Parse and validate a circuit file");
  validate->add_option("file", path, "Circuit file")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--seed", seed, "Seed for the randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*selftest) {
      const auto results = acceptance::run_all(seed);
      std::cout << acceptance::format_results(results);
      return acceptance::all_passed(results) ? 0 : exit_status(ErrorKind::ToleranceViolation);
    }
    const CircuitFile file = parse_circuit(read_file(path));
    if (*validate) {
      std::cout << "ok " << file.name << ": " << file.qubits << " qubits, " << file.gates.size() << " steps, "
                << file.queries.size() << " queries\n";
      return 0;
    }
    const RunReport report = run_circuit(file, parse_overrides(tol_items));
    std::cout << (summary ? format_summary(report.document) : format_report(report.document));
    return report.exit_status;
  } catch (const Error& e) {
    std::cerr << "heisenet: " << e.what() << "\n";
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "heisenet: internal error: " << e.what() << "\n";
    return exit_status(ErrorKind::Internal);
  }
}
