#pragma once

#include <string>
#include <utility>

#include "lagflow/closure.hpp"
#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"

namespace lagflow {

// Sup over the margin interior of the Euclidean norm of the full third-order
// difference tensor: each entry is one centered difference of a discrete
// Hessian plane (width-2 composite stencil, exact on cubics, annihilates
// quadratics). Ghost values are consulted only when margin == 1, where the
// differenced Hessian touches the boundary shell. Requires m >= 7.
double d3_sup(const ScalarField& u, const GhostView& ghost, int margin = 1);

// (lowest, highest) eigenvalue of the discrete Hessian over the margin interior.
std::pair<double, double> hessian_range(const ScalarField& u, int margin);

// Sup over the margin interior of |G(D2u) - mean G(D2u)|; zero iff the graph
// has constant Lagrangian angle (the discrete minimality diagnostic).
double minimality_defect(const ScalarField& u, const GhostView& ghost, int margin = 1);

struct ConditionA {
    bool pass = false;
    double margin = 0.0;
};

// Pinching check: margin = (1 - delta) - sup spectral radius of the discrete
// Hessian, over the cells at least `margin` steps from the boundary (at
// least 1 when no ghost closure is available, since the stencil needs a
// neighbor on each side). Certificates pass the run's reporting margin so
// the check covers the same window as every other reported norm. The pass
// threshold tolerates stencil roundoff (margin >= -1e-11): sampled
// quadratics with inexact coefficients land within ~1e-12 of the exact
// bound, on either side.
ConditionA check_condition_a(const ScalarField& u, double delta, const GhostView& ghost,
                             int margin = 0);

struct DecayMonitor {
    double empirical_constant = 0.0; // sup over usable rows of d3_sup * sqrt(t)
    bool non_increasing = false;     // trend flag after the 10-step transient
};

// Empirical constant and monotonicity of d3_sup * sqrt(t) across report rows
// (only the third-derivative monitor, l = 3, is supported; higher orders are
// noise-amplifying at these resolutions). Needs at least two rows with t > 0
// past the transient.
DecayMonitor decay_monitor(const FlowReport& report, int l = 3);

// CSV point cloud (x coordinates, then Du components) of the Lagrangian graph
// over the margin interior; (m - 2*margin)^n rows plus a header.
void graph_export(const ScalarField& u, const GhostView& ghost, const std::string& path,
                  int margin = 1);

} // namespace lagflow
