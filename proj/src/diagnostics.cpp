#include "lagflow/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "interior_ops.hpp"
#include "lagflow/io.hpp"
#include "lagflow/kernels.hpp"
#include "lagflow/stencils.hpp"

namespace lagflow {

namespace {

// Pass threshold for Condition A: sampled quadratics whose coefficients are
// not exactly representable land within ~1e-12 of the exact eigenvalue bound,
// on either side, so "touching the bound" must not count as a violation.
constexpr double kCondATol = 1e-11;

double angle_at(const HessianField& H, std::size_t f) {
    namespace pm = kernels::pointmath;
    if (H.grid.dim == 1) return std::atan(H.plane(0)[f]);
    if (H.grid.dim == 2) return pm::angle2_point(H.plane(0)[f], H.plane(1)[f], H.plane(2)[f]);
    return pm::angle3_point(H.plane(0)[f], H.plane(1)[f], H.plane(2)[f], H.plane(3)[f],
                            H.plane(4)[f], H.plane(5)[f]);
}

double spectral_radius_at(const HessianField& H, std::size_t f) {
    if (H.grid.dim == 1) return std::fabs(H.plane(0)[f]);
    if (H.grid.dim == 2) {
        double lo, hi;
        eig2_closed(H.plane(0)[f], H.plane(1)[f], H.plane(2)[f], lo, hi);
        return std::max(std::fabs(lo), std::fabs(hi));
    }
    double e0, e1, e2;
    eig3_closed(H.plane(0)[f], H.plane(1)[f], H.plane(2)[f], H.plane(3)[f], H.plane(4)[f],
                H.plane(5)[f], e0, e1, e2);
    return std::max(std::fabs(e0), std::fabs(e2));
}

void check_window(const Grid& g, int margin, const char* op) {
    if (margin < 1 || 2 * margin >= g.m)
        throw usage_error(std::string(op) + ": margin out of range for this grid");
}

} // namespace

double d3_sup(const ScalarField& u, const GhostView& ghost, int margin) {
    const Grid& g = u.grid;
    if (g.m < 7) throw usage_error("d3_sup: needs at least 7 points per axis");
    check_window(g, margin, "d3_sup");

    // The differenced Hessian reads one cell past the window, so only
    // margin == 1 ever touches boundary-shell Hessians (and hence the ghost
    // closure). Larger margins stay strictly inside the 1-cell interior.
    const HessianField H = margin >= 2 ? hessian_interior(u) : hessian(u, ghost);
    const double i2h = 1.0 / (2.0 * g.h);

    double sup = 0.0;
    detail::for_each_margin_cell(g, margin, [&](std::size_t f, const std::array<int, kMaxDim>&) {
        double sumsq = 0.0;
        for (int i = 0; i < g.dim; ++i) {
            const std::ptrdiff_t s = g.stride(i);
            for (int j = i; j < g.dim; ++j)
                for (int k = j; k < g.dim; ++k) {
                    const double* pl = H.plane(H.plane_index(j, k));
                    const double v = i2h * (pl[f + static_cast<std::size_t>(s)] -
                                            pl[f - static_cast<std::size_t>(s)]);
                    // Multiset multiplicity of the index triple (i<=j<=k):
                    // 1 for aaa, 3 for aab/abb, 6 for abc.
                    const double mult = (i == j && j == k) ? 1.0 : (i == j || j == k) ? 3.0 : 6.0;
                    sumsq += mult * v * v;
                }
        }
        const double norm = std::sqrt(sumsq);
        if (norm > sup) sup = norm;
    });
    return sup;
}

std::pair<double, double> hessian_range(const ScalarField& u, int margin) {
    const Grid& g = u.grid;
    check_window(g, margin, "hessian_range");
    const HessianField H = hessian_interior(u);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    detail::for_each_margin_cell(g, margin, [&](std::size_t f, const std::array<int, kMaxDim>&) {
        if (g.dim == 1) {
            double v = H.plane(0)[f];
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        } else if (g.dim == 2) {
            double a, b;
            eig2_closed(H.plane(0)[f], H.plane(1)[f], H.plane(2)[f], a, b);
            if (a < lo) lo = a;
            if (b > hi) hi = b;
        } else {
            double e0, e1, e2;
            eig3_closed(H.plane(0)[f], H.plane(1)[f], H.plane(2)[f], H.plane(3)[f], H.plane(4)[f],
                        H.plane(5)[f], e0, e1, e2);
            if (e0 < lo) lo = e0;
            if (e2 > hi) hi = e2;
        }
    });
    return {lo, hi};
}

double minimality_defect(const ScalarField& u, const GhostView& ghost, int margin) {
    const Grid& g = u.grid;
    if (margin < 0 || 2 * margin >= g.m)
        throw usage_error("minimality_defect: margin out of range for this grid");
    // Margin >= 1 never reads the boundary shell's Hessian, so the ghost
    // closure is only consulted for whole-lattice (margin == 0) evaluation.
    const HessianField H = margin == 0 ? hessian(u, ghost) : hessian_interior(u);

    std::vector<double> angles;
    angles.reserve(g.num_points());
    double sum = 0.0;
    detail::for_each_margin_cell(g, margin, [&](std::size_t f, const std::array<int, kMaxDim>&) {
        double a = angle_at(H, f);
        angles.push_back(a);
        sum += a;
    });
    const double mean = sum / static_cast<double>(angles.size());
    double sup = 0.0;
    for (double a : angles) {
        double d = std::fabs(a - mean);
        if (d > sup) sup = d;
    }
    return sup;
}

ConditionA check_condition_a(const ScalarField& u, double delta, const GhostView& ghost, int margin) {
    if (!(delta > 0.0 && delta < 1.0))
        throw usage_error("check_condition_a: delta must lie in (0, 1)");
    if (margin < 0) throw usage_error("check_condition_a: margin must be >= 0");
    const Grid& g = u.grid;
    const bool whole = ghost.available();
    const HessianField H = whole ? hessian(u, ghost) : hessian_interior(u);
    double sup = 0.0;
    const int eff = whole ? margin : std::max(margin, 1);
    detail::for_each_margin_cell(g, eff, [&](std::size_t f, const std::array<int, kMaxDim>&) {
        double r = spectral_radius_at(H, f);
        if (r > sup) sup = r;
    });
    ConditionA out;
    out.margin = (1.0 - delta) - sup;
    out.pass = out.margin >= -kCondATol;
    return out;
}

DecayMonitor decay_monitor(const FlowReport& report, int l) {
    if (l != 3)
        throw usage_error("decay_monitor: only the third-derivative monitor (l = 3) is implemented");
    if (report.rows.size() < 2) throw usage_error("decay_monitor: report too short");

    DecayMonitor out;
    for (const ReportRow& r : report.rows)
        if (r.time > 0.0 && r.d3_sqrt_t > out.empirical_constant) out.empirical_constant = r.d3_sqrt_t;

    // Trend check skips the start-up transient (the first ten steps), during
    // which the monitored quantity may legitimately grow from zero.
    std::vector<double> tail;
    for (const ReportRow& r : report.rows)
        if (r.step >= 10 && r.time > 0.0) tail.push_back(r.d3_sqrt_t);
    if (tail.size() < 2) throw usage_error("decay_monitor: needs at least two post-transient rows");
    out.non_increasing = true;
    for (std::size_t i = 1; i < tail.size(); ++i)
        if (tail[i] > tail[i - 1] * (1.0 + 1e-10)) out.non_increasing = false;
    return out;
}

void graph_export(const ScalarField& u, const GhostView& ghost, const std::string& path, int margin) {
    const Grid& g = u.grid;
    if (margin < 0 || 2 * margin >= g.m)
        throw usage_error("graph_export: margin out of range for this grid");

    // Whole-lattice export needs ghost values for the boundary-shell gradient;
    // any positive margin stays inside the grid.
    VectorField ring_grad;
    if (margin == 0) ring_grad = gradient(u, ghost);

    std::ofstream out(path);
    if (!out) throw usage_error("graph_export: cannot open '" + path + "' for writing");

    for (int d = 0; d < g.dim; ++d) out << (d ? ",x" : "x") << d;
    for (int d = 0; d < g.dim; ++d) out << ",du" << d;
    out << "\n";

    const double i2h = 1.0 / (2.0 * g.h);
    detail::for_each_margin_cell(g, margin, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        for (int d = 0; d < g.dim; ++d) {
            if (d) out << ",";
            out << format_sig17(g.coord(idx[static_cast<std::size_t>(d)]));
        }
        for (int d = 0; d < g.dim; ++d) {
            double dv;
            if (margin == 0) {
                dv = ring_grad.plane(d)[f];
            } else {
                const std::size_t s = static_cast<std::size_t>(g.stride(d));
                dv = i2h * (u.at(f + s) - u.at(f - s));
            }
            out << "," << format_sig17(dv);
        }
        out << "\n";
    });
    if (!out) throw usage_error("graph_export: write to '" + path + "' failed");
}

} // namespace lagflow
