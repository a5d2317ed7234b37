#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "heisenet/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = heisenet::acceptance::kDefaultSeed;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--seed N]\n";
      return 1;
    }
  }
  const auto results = heisenet::acceptance::run_all(seed);
  std::cout << heisenet::acceptance::format_results(results);
  return heisenet::acceptance::all_passed(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
