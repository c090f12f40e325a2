#pragma once

#include <string>
#include <vector>

#include "fpflow/config.hpp"
#include "fpflow/power.hpp"

namespace fpflow {

struct CheckRow {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckRow> rows;
    std::vector<std::string> files_written;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// Solves the configured problem and writes solution VTK, interface-residual
/// CSV and a power summary into config.out_dir.
struct SolveOutputs {
    Solution solution;
    PowerBreakdown power;
    InterfaceResiduals residuals;
    double mass_residual = 0.0;
    std::vector<std::string> files_written;

    bool residual_contract_ok() const {
        return solution.residual_norm < 1e-9 && residuals.r1_weighted_max < 1e-9 &&
               mass_residual < 1e-10;
    }
};

SolveOutputs run_solve(const RunConfig& config);

// Verification suites; each is independently callable and writes its report
// (and any data tables) under config.out_dir.
SuiteReport suite_minpower(const RunConfig& config);
SuiteReport suite_gradient(const RunConfig& config);
SuiteReport suite_uniqueness(const RunConfig& config);
SuiteReport suite_jump(const RunConfig& config);
SuiteReport suite_channel(const RunConfig& config);
SuiteReport suite_convergence(const RunConfig& config);

/// Dispatch by name: minpower, gradient, uniqueness, jump, channel, convergence.
SuiteReport run_suite(const std::string& name, const RunConfig& config);

}  // namespace fpflow
