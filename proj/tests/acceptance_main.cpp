#include <cstdio>

#include "besov/tools/acceptance.hpp"

int main() {
    bool all = true;
    besov::tools::run_acceptance({}, [&](const besov::tools::CriterionResult& r) {
        std::printf("%s %2d %s (%.2f s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
        for (const auto& line : r.details) std::printf("      %s\n", line.c_str());
        std::fflush(stdout);
        all = all && r.passed;
    });
    return all ? 0 : 1;
}
