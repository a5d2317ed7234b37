#pragma once

#include <cstdint>
#include <string>
#include <vector>

// The acceptance suite behind `heisenet selftest` and the `acceptance` test
// binary. Every randomized check draws from a generator seeded with `seed`,
// so a fixed seed gives byte-identical output.

namespace heisenet::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic: measured residuals, no timings
};

inline constexpr std::uint64_t kDefaultSeed = 20201;

/// Criteria 1 to 9 only.
std::vector<CriterionResult> run_checks(std::uint64_t seed);

/// Criteria 1 to 10. Criterion 10 re-runs 1 to 9 and a reference circuit
/// report and compares the rendered bytes.
std::vector<CriterionResult> run_all(std::uint64_t seed);

/// One "PASS|FAIL <id> <name>: <detail>" line per criterion.
std::string format_results(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

/// Reference two-qubit measurement circuit, as shipped in circuits/.
extern const char* const kMeasurementCircuit;

}  // namespace heisenet::acceptance
