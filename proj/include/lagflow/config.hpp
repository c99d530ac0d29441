#pragma once

#include <map>
#include <string>

#include "lagflow/errors.hpp"

namespace lagflow {

// Knobs shared by every flow run. `horizon` is t_end for the physical flow and
// s_end for the rescaled flows. stationarity_tol <= 0 disables early stopping.
struct RunConfig {
    double delta = 0.5;            // pinching parameter: |eig D2u| <= 1 - delta expected
    double dt_safety = 0.9;        // fraction of the explicit stability bound
    double horizon = 1.0;          // end time (physical t or rescaled s)
    int snapshot_stride = 50;      // report/snapshot every this many steps
    int margin = 4;                // interior margin (cells) for all reported norms
    double stationarity_tol = 1e-8; // sup-interior rate threshold (10 consecutive steps)
    double residual_tol = 1e-4;    // certificate acceptance threshold on the residual

    void validate() const {
        if (!(delta > 0.0 && delta < 1.0)) throw usage_error("RunConfig: delta must be in (0,1)");
        if (!(dt_safety > 0.0 && dt_safety <= 1.0))
            throw usage_error("RunConfig: dt_safety must be in (0,1]");
        if (!(horizon > 0.0)) throw usage_error("RunConfig: horizon must be positive");
        if (snapshot_stride < 1) throw usage_error("RunConfig: snapshot_stride must be >= 1");
        if (margin < 2) throw usage_error("RunConfig: margin must be >= 2");
        if (!(residual_tol > 0.0)) throw usage_error("RunConfig: residual_tol must be positive");
    }
};

// Parses a flat "key = value" config file ('#' comments, blank lines ok).
// Unknown keys are an error (they are always typos in practice).
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Applies recognized keys onto a RunConfig; erases consumed keys from the map.
void apply_config(RunConfig& cfg, std::map<std::string, std::string>& kv);

} // namespace lagflow
