#ifndef RISKM_SELFTEST_HPP
#define RISKM_SELFTEST_HPP

#include <string>
#include <vector>

namespace riskm {

// One end-to-end check of a shipped guarantee: exact fixture values, table
// reproductions, equivalence laws on randomized suites, and the runtime
// budgets they must fit in. Tolerances are pinned in the implementation.
struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double millis = 0.0;
};

// Runs all guarantees in order (deterministic seeds) and reports each one.
std::vector<CriterionResult> run_selftest();

}  // namespace riskm

#endif  // RISKM_SELFTEST_HPP
