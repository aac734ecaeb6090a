#pragma once

#include <string>
#include <vector>

namespace nht {

struct CheckResult {
    std::string name;
    bool passed{false};
    std::string detail;
};

// Fast structural and numerical invariants (operator equivalences, symmetries,
// derivative consistency, short propagation oracles). Deterministic.
std::vector<CheckResult> run_invariant_checks();

}  // namespace nht
