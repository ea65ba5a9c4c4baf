#pragma once

#include "lipcurv/report.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lipcurv {

struct Criterion {
    int id = 0;
    std::string slug;
    std::string title;
    bool example = false;  // part of "paper-examples"; the rest form "invariants"
    std::function<ExperimentReport(std::uint64_t seed)> run;
};

// The acceptance battery, in order.
const std::vector<Criterion>& criteria();

// Selects by suite name: "paper-examples", "invariants" or "all" ("bad-suite" otherwise).
std::vector<const Criterion*> select_criteria(const std::string& name);

struct CriterionResult {
    const Criterion* criterion = nullptr;
    ExperimentReport report;
    double seconds = 0;
    std::string error;  // set when the run threw
    bool pass() const { return error.empty() && report.all_pass(); }
};

// Runs the selected criteria on up to `threads` workers; results keep the
// battery order.  `done` is called as each criterion finishes (under a lock).
std::vector<CriterionResult> run_criteria(const std::vector<const Criterion*>& list, std::uint64_t seed,
                                          int threads = 1,
                                          const std::function<void(const CriterionResult&)>& done = {});

ExperimentReport suite_report(const std::vector<CriterionResult>& results);

}  // namespace lipcurv
