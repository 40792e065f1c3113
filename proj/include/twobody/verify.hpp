#pragma once

#include <string>
#include <vector>

namespace twobody {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast oracle and property battery behind the `verify` subcommand: worked
/// examples, exhaustive small-instance identities, contraction and
/// table-feasibility properties, sampler and schedule checks, and the
/// scalar/SIMD kernel equivalence. Runs in seconds.
std::vector<CheckResult> run_verification();

}  // namespace twobody
