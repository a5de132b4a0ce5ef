#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmaps {

// One acceptance suite: a batch of randomized property checks with fixed
// tolerances. `note` carries either summary statistics or the first failure.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string note;
};

// Runs the nine library-level acceptance suites with a deterministic stream of
// instances derived from `seed`. The CLI end-to-end suite lives with the test
// driver instead, since it has to spawn the binary.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace qmaps
