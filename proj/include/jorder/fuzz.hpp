#ifndef JORDER_FUZZ_HPP_
#define JORDER_FUZZ_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "jorder/io.hpp"

namespace jorder {

struct FuzzConfig {
  int count = 200;
  int dim_lo = 2;
  int dim_hi = 6;
  double spec_lo = 0.5;
  double spec_hi = 10.0;
  std::uint64_t seed = 0;
  int restarts = 64;
  std::vector<std::string> functions{"sqrt", "pow:0.3", "log1p"};
  std::string dump_dir = "fuzz_cases";  // created lazily, on first failure
};

struct FuzzOutcome {
  bool pass = false;
  Json report;
};

// Two property suites over seeded random inputs.  Method agreement: tangent
// and sphere verdicts must match on engineered-valid pairs (A = B, or the
// second slot shifted up) and on independent pairs.  Contrapositive: pairs
// separated by at least 0.1 in operator norm must yield a violation witness
// for one of the two orderings.  Failing cases are dumped as matrix files
// next to a one-line repro command embedded in the report.
FuzzOutcome run_fuzz(const FuzzConfig& config);

}  // namespace jorder

#endif  // JORDER_FUZZ_HPP_
