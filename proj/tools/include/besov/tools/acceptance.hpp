#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace besov::tools {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;  // one line per individual check
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20261019;
    std::vector<int> criteria;         // empty runs 1..12
    std::filesystem::path scratch;     // empty uses a fresh temporary directory
};

inline constexpr int kCriterionCount = 12;

std::string criterion_title(int id);

/// Runs the selected criteria in order; `on_result` sees each one as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace besov::tools
