#pragma once

#include <string>
#include <vector>

namespace polykin::acceptance {

/// One verification criterion of the end-to-end battery.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    /// Failure anticipated by analysis (see docs/verification_notes.md);
    /// reported as FAIL but not counted as an unexpected failure.
    bool expected_fail = false;
    std::string detail;
};

/// Run the full battery (quick mode shrinks ensembles and horizons for
/// smoke-level coverage). Results come back in criterion order.
std::vector<CriterionResult> run_all(bool quick);

/// Number of criteria whose outcome differs from expectation (pass == false
/// and expected_fail == false, or pass == true and expected_fail == true).
int unexpected_failures(const std::vector<CriterionResult>& results);

/// "criterion <id> <name>: PASS/FAIL (<detail>)" per line.
std::string format_table(const std::vector<CriterionResult>& results);

} // namespace polykin::acceptance
