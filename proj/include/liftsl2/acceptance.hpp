#pragma once

#include <optional>
#include <string>
#include <vector>

namespace liftsl2 {

// One acceptance criterion outcome. The full battery is exact: every check
// is a relation verified at working precision or an oracle equivalence.
struct CriterionResult {
    int index;
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

struct AcceptanceOptions {
    std::optional<int> only_criterion; // 1..11
    std::optional<int> only_p;         // restrict to criteria touching this p
    unsigned jobs = 1;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

// "[ 3] PASS  flat-family trace law ... (1.23 s)"
std::string format_result_line(const CriterionResult& r);

} // namespace liftsl2
