// Acceptance battery: one pass/fail line per criterion, nonzero exit on any
// failure. Also reachable through `liftsl2 selftest`.
#include <cstring>
#include <iostream>

#include "liftsl2/acceptance.hpp"

int main(int argc, char** argv) {
    liftsl2::AcceptanceOptions opt;
    opt.jobs = 4;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            opt.only_criterion = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc)
            opt.jobs = (unsigned)std::atoi(argv[++i]);
    }
    auto results = liftsl2::run_acceptance(opt);
    bool all = true;
    for (const auto& r : results) {
        std::cout << liftsl2::format_result_line(r) << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES present")
              << std::endl;
    return all ? 0 : 1;
}
