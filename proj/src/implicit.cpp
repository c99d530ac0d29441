#include <cmath>
#include <vector>

#include "interior_ops.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/stencils.hpp"

namespace lagflow {

namespace {

// tr(M D2v) at an interior cell, coefficients packed as (diagonals, then
// upper off-diagonals doubled): the only operator the CG loop applies.
double melliptic_at(const Grid& g, const double* v, std::size_t f, const double* cdiag,
                    const double* ccross) {
    const double ih2 = 1.0 / (g.h * g.h);
    const double i4h2 = 1.0 / (4.0 * g.h * g.h);
    double acc = 0.0;
    for (int d = 0; d < g.dim; ++d) {
        const std::size_t s = static_cast<std::size_t>(g.stride(d));
        acc += cdiag[d] * (ih2 * ((v[f - s] + v[f + s]) - 2.0 * v[f]));
    }
    int p = 0;
    for (int d = 0; d < g.dim; ++d)
        for (int e = d + 1; e < g.dim; ++e, ++p) {
            const std::size_t sd = static_cast<std::size_t>(g.stride(d));
            const std::size_t se = static_cast<std::size_t>(g.stride(e));
            acc += ccross[p] *
                   (i4h2 * ((v[f + sd + se] + v[f - sd - se]) - (v[f + sd - se] + v[f - sd + se])));
        }
    return acc;
}

} // namespace

// One backward-Euler step of the potential flow, semi-implicit: the angle is
// linearized around the current origin Hessian A0, giving the constant-
// coefficient SPD system
//   v - dt tr(M D2 v) = u + dt (G(D2u) - tr(M D2 u)),   M = (I + A0^2)^{-1},
// with the boundary shell pinned to the closure at t + dt. Exact (up to the
// CG tolerance) whenever the Hessian is spatially constant; useful when the
// explicit parabolic dt restriction is the bottleneck.
FlowState step_physical_implicit(const FlowState& state, const BoundaryClosure& closure,
                                 const RunConfig& cfg, double dt) {
    cfg.validate();
    if (closure.kind != ClosureKind::frozen_hessian_dirichlet)
        throw usage_error("step_physical_implicit: needs the frozen-Hessian closure");
    if (!(dt > 0.0)) throw usage_error("step_physical_implicit: dt must be positive");
    const Grid& g = state.field.grid;
    const std::size_t N = g.num_points();

    const GhostView gv_now = at_time(closure, state.time);
    const HessianField H = hessian(state.field, gv_now);
    const ScalarField G = angle_field(H);

    // Frozen linearization coefficients, diagonals and doubled off-diagonals.
    const SymMatrix M = linearization(H.at(g.origin_flat()));
    double cdiag[kMaxDim] = {0.0, 0.0, 0.0};
    double ccross[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) cdiag[d] = M.at(d, d);
    {
        int p = 0;
        for (int d = 0; d < g.dim; ++d)
            for (int e = d + 1; e < g.dim; ++e, ++p) ccross[p] = 2.0 * M.at(d, e);
    }

    // Right-hand side; ring cells carry the Dirichlet value at t + dt.
    const double t_next = state.time + dt;
    ScalarField rhs(g);
    detail::for_each_margin_cell(g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) {
        const double mtr = melliptic_at(g, state.field.data(), f, cdiag, ccross);
        rhs.v[f] = state.field.at(f) + dt * (G.at(f) - mtr);
    });
    const ConeSpec& cone = closure.cone;
    detail::for_each_ring_cell(g, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        std::array<double, kMaxDim> x{};
        g.coords_of(idx, x);
        rhs.v[f] = cone.value(x) + t_next * cone.angle_at(x);
    });

    // Preconditioned CG on the interior unknowns (Jacobi preconditioner);
    // ring entries of the search direction stay zero, which eliminates the
    // Dirichlet rows symmetrically.
    ScalarField v(g);
    v.v = rhs.v; // initial guess: rhs (exact when dt -> 0)
    std::vector<double> r(N, 0.0), z(N, 0.0), p(N, 0.0), ap(N, 0.0);

    auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
        detail::for_each_margin_cell(g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) {
            out[f] = x[f] - dt * melliptic_at(g, x.data(), f, cdiag, ccross);
        });
    };

    const double ih2 = 1.0 / (g.h * g.h);
    double diag = 1.0;
    for (int d = 0; d < g.dim; ++d) diag += dt * cdiag[d] * 2.0 * ih2;
    const double idiag = 1.0 / diag;

    apply(v.v, ap);
    double rr0 = 0.0;
    detail::for_each_margin_cell(g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) {
        r[f] = rhs.v[f] - ap[f];
        z[f] = idiag * r[f];
        p[f] = z[f];
        rr0 += rhs.v[f] * rhs.v[f];
    });
    const double tol2 = 1e-20 * (rr0 > 0.0 ? rr0 : 1.0); // relative l2 tolerance 1e-10

    double rz = 0.0;
    detail::for_each_margin_cell(g, 1,
                                 [&](std::size_t f, const std::array<int, kMaxDim>&) { rz += r[f] * z[f]; });

    bool converged = false;
    for (int it = 0; it < 500; ++it) {
        double rr = 0.0;
        detail::for_each_margin_cell(
            g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) { rr += r[f] * r[f]; });
        if (rr <= tol2) {
            converged = true;
            break;
        }
        apply(p, ap);
        double pap = 0.0;
        detail::for_each_margin_cell(
            g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) { pap += p[f] * ap[f]; });
        if (!(pap > 0.0)) throw numerical_error("step_physical_implicit: operator lost definiteness");
        const double alpha = rz / pap;
        double rz_next = 0.0;
        detail::for_each_margin_cell(g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) {
            v.v[f] += alpha * p[f];
            r[f] -= alpha * ap[f];
            z[f] = idiag * r[f];
            rz_next += r[f] * z[f];
        });
        const double beta = rz_next / rz;
        rz = rz_next;
        detail::for_each_margin_cell(
            g, 1, [&](std::size_t f, const std::array<int, kMaxDim>&) { p[f] = z[f] + beta * p[f]; });
    }
    if (!converged)
        throw numerical_error("step_physical_implicit: conjugate gradient did not converge in 500 iterations");

    FlowState out;
    out.field = std::move(v);
    out.time = t_next;
    out.step_count = state.step_count + 1;
    return out;
}

} // namespace lagflow
