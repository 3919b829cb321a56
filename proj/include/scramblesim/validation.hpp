#pragma once

// Cross-module oracle suite. Each check pits one implementation path against
// an independent prediction for the same quantity: closed forms, brute-force
// string enumeration, Monte-Carlo circuit averages, scaling laws, or exactly
// solvable limits. Checks are self-contained and deterministic; each returns
// measured numbers alongside the fixed thresholds they were held to.

#include <string>
#include <vector>

namespace scramble {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    // "label=value (tol ...)" fragments, semicolon separated.
    std::string details;
};

// Ascending list of available check ids.
std::vector<int> validation_check_ids();

// Short slug for a check id; throws std::invalid_argument for unknown ids.
std::string validation_check_name(int id);

// Runs a single check; throws std::invalid_argument for unknown ids.
CheckResult run_validation_check(int id);

// Runs the listed checks in ascending order; empty list means all of them.
std::vector<CheckResult> run_validation_checks(std::vector<int> ids = {});

// One aligned "[PASS]/[FAIL] id name (time) details" line, no newline.
std::string format_check_line(const CheckResult& result);

}  // namespace scramble
