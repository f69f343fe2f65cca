#pragma once

#include <string>
#include <vector>

namespace akmeter {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// The full verification corpus: error relations on randomized apparatus
// states, distribution identities across the state corpus, dual-route
// agreement, pointer bound saturation, the disturbance trade-off figures,
// small-region state preparation, the kernel-layer closure, numerics hygiene
// and sampling checks. Independent criteria run in parallel.
std::vector<CriterionResult> run_verification_suite();

}  // namespace akmeter
