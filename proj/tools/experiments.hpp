#pragma once

#include <map>
#include <string>
#include <vector>

namespace lagflow::experiments {

// One verifiable claim of an experiment, with the measured evidence.
struct CheckLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct ExperimentResult {
    std::string name;
    std::vector<CheckLine> checks;
    std::map<std::string, double> metrics;

    bool all_pass() const {
        for (const CheckLine& c : checks)
            if (!c.pass) return false;
        return true;
    }
    bool passed(const std::string& label) const {
        for (const CheckLine& c : checks)
            if (c.label == label) return c.pass;
        return false;
    }
    double metric(const std::string& key) const {
        auto it = metrics.find(key);
        return it == metrics.end() ? 0.0 : it->second;
    }
};

// The desk-scale experiments. Every numeric threshold is pinned inside the
// implementation; callers only consume pass/fail lines and measured values.
// All of them write their report/field/certificate artifacts plus a manifest
// under out_dir (created if missing).

// Exactly solvable physical flow from a global quadratic (checks: exact_error,
// condition_a_rows).
ExperimentResult quadratic_flow(const std::string& out_dir, int workers);

// Piecewise-quadratic cone -> expander construction, round trip back to the
// cone, and the worker-count determinism re-run (checks: residual, horizon,
// d3_nontrivial, roundtrip, determinism, condition_a_rows).
ExperimentResult paper_expander(const std::string& out_dir, int workers);

// Physical flow from smooth cone + bump: self-similarity defect decay and the
// third-derivative decay monitor (checks: defect_decreasing, defect_final,
// decay_trend, condition_a_rows).
ExperimentResult cone_bump_flow(const std::string& out_dir, int workers);

// Normalized shrinker flow from perturbed quadratic (checks: d3_decay,
// fit_monotone, condition_a_rows).
ExperimentResult shrinker_probe(const std::string& out_dir, int workers);

// Static + dynamic translator identity (checks: static_residual,
// dynamic_defect, condition_a_rows).
ExperimentResult translator_check(const std::string& out_dir, int workers);

// Spatial order under h-halving at fixed R, and the residual ratio under
// R-doubling at fixed h (checks: order, domain_ratio).
ExperimentResult convergence_study(const std::string& out_dir, int workers);

// All of the above, in the order used by the acceptance gate.
std::vector<std::string> preset_names();
ExperimentResult run_preset(const std::string& name, const std::string& out_dir, int workers);

} // namespace lagflow::experiments
