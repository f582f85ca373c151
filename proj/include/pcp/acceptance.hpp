#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pcp {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // the numbers that were compared, for the manifest
};

// The 13-criterion verification battery. `quick` shrinks Monte Carlo sample
// counts by roughly two orders of magnitude for smoke runs; the official gate
// runs with quick = false.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, bool quick);

}  // namespace pcp
