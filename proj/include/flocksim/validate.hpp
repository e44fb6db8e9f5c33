#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flocksim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Fast oracle/invariant suite behind the `validate` subcommand: kernel bounds,
// mollifier normalization and support, cutoff smoothness, schedule identity,
// free transport, determinism, force cancellation, alignment bound, coupling
// degeneracy and a small OU check. A few seconds end to end.
std::vector<CheckResult> run_validation(uint64_t seed);

}  // namespace flocksim
