// Flow engine: step exactness on quadratic data, soliton fixed points,
// the equivariance family (constant shift, lattice translation, parabolic
// scaling), the self-similarity defect, and the implicit step.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "lagflow/flow.hpp"
#include "lagflow/soliton.hpp"
#include "lagflow/stencils.hpp"

using namespace lagflow;

namespace {

RunConfig quick_cfg() {
    RunConfig cfg;
    cfg.delta = 0.5;
    cfg.margin = 2;
    cfg.stationarity_tol = 0.0;
    return cfg;
}

double sup_diff_margin(const ScalarField& a, const ScalarField& b, int margin) {
    REQUIRE(a.grid == b.grid);
    ScalarField d(a.grid);
    for (std::size_t f = 0; f < d.size(); ++f) d.v[f] = a.v[f] - b.v[f];
    return sup_abs_interior(d, margin);
}

} // namespace

TEST_CASE("physical step is exact on single-sector quadratic data") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    FlowState s;
    s.field = sample_cone(cone, g);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    FlowState s1 = step_physical(s, closure, quick_cfg());
    const double dt = s1.time;
    REQUIRE(dt > 0.0);
    const double ang = cone.sectors[0].angle_value;
    double worst = 0.0;
    for (std::size_t f = 0; f < s1.field.size(); ++f)
        worst = std::max(worst, std::fabs(s1.field.v[f] - (s.field.v[f] + dt * ang)));
    CHECK(worst <= 1e-13);
    CHECK(s1.step_count == 1);
}

TEST_CASE("exact quadratic solitons are fixed points of the rescaled flows") {
    SymMatrix A = SymMatrix::diag({0.5, 0.3});
    ConeSpec cone = ConeSpec::single(A);
    Grid g(2, 2.0, 33);

    {
        FlowState s;
        s.field = sample_soliton(quadratic_soliton(A, SolitonKind::expander), g);
        BoundaryClosure closure = BoundaryClosure::expander(cone);
        FlowState s1 = step_rescaled_expander(s, closure, quick_cfg());
        CHECK(sup_diff_margin(s1.field, s.field, 0) <= 1e-12);
    }
    {
        FlowState s;
        s.field = sample_soliton(quadratic_soliton(A, SolitonKind::shrinker), g);
        BoundaryClosure closure = BoundaryClosure::shrinker(cone);
        FlowState s1 = step_normalized_shrinker(s, closure, quick_cfg());
        CHECK(sup_diff_margin(s1.field, s.field, 0) <= 1e-12);
    }
}

TEST_CASE("constant-shift equivariance up to stencil roundoff") {
    // G depends only on D2u, so evolving u0 + c should equal evolving u0 and
    // adding c. The ring pin cannot carry the shift (the cone format has no
    // constant term), and one RK2 step propagates that mismatch two cells in
    // from the ring (stage one reaches distance 1, stage two distance 2), so
    // the comparison starts at distance 3 and allows the 1/h^2-amplified
    // rounding of the pre-shifted samples.
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.25}));
    Grid g(2, 2.0, 33);
    ScalarField u0 = sample_cone(cone, g);
    add_compact_bump(u0, {}, 0.02, 0.5);
    ScalarField u0c = u0;
    const double c = 2.0;
    for (double& v : u0c.v) v += c;

    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    FlowState a, b;
    a.field = u0;
    b.field = u0c;
    FlowState a1 = step_physical(a, closure, quick_cfg());
    FlowState b1 = step_physical(b, closure, quick_cfg());
    double worst = 0.0;
    std::array<int, kMaxDim> idx{};
    for (std::size_t f = 0; f < a1.field.size(); ++f) {
        g.unflatten(f, idx);
        if (!g.in_margin_interior(idx, 3)) continue;
        worst = std::max(worst, std::fabs(b1.field.v[f] - a1.field.v[f] - c));
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("lattice-translation equivariance away from the boundary") {
    // Shift the initial data by 3 whole cells along axis 0; on the overlap
    // window that the ring influence cannot reach in two steps, the shifted
    // run reproduces the unshifted one exactly.
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    ScalarField ua = sample_cone(cone, g);
    add_compact_bump(ua, {}, 0.02, 0.4);
    const int shift = 3;
    const std::ptrdiff_t fshift = shift * g.stride(0);
    ScalarField ub(g);
    std::array<int, kMaxDim> idx{};
    for (std::size_t f = 0; f < ub.size(); ++f) {
        g.unflatten(f, idx);
        if (idx[0] >= shift)
            ub.v[f] = ua.v[f - static_cast<std::size_t>(fshift)];
        else
            ub.v[f] = ua.v[f]; // outside the comparison window; any value works
    }

    RunConfig cfg = quick_cfg();
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    FlowEngine ea(FlowKind::physical, closure, cfg);
    FlowEngine eb(FlowKind::physical, closure, cfg);
    ea.start(ua);
    eb.start(ub);
    const double dt = ea.nominal_dt();
    for (int k = 0; k < 2; ++k) {
        ea.advance(dt);
        eb.advance(dt);
    }
    double worst = 0.0;
    for (std::size_t f = 0; f < ua.size(); ++f) {
        g.unflatten(f, idx);
        // window where the shifted footprint (2 steps x stencil width 2 per
        // step, plus the shift itself) never touches either ring
        if (idx[0] < 8 + shift || idx[0] > g.m - 1 - 8) continue;
        if (idx[1] < 8 || idx[1] > g.m - 1 - 8) continue;
        worst = std::max(worst,
                         std::fabs(eb.field().v[f] - ea.field().v[f - static_cast<std::size_t>(fshift)]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("parabolic scaling equivariance on quadratic data") {
    // One step of dt from u then the lambda = 2 view equals the view first,
    // then one step of dt/4 (same h on both grids by construction).
    SymMatrix A = SymMatrix::diag({0.5, 0.3});
    ConeSpec cone = ConeSpec::single(A);
    Grid parent(2, 4.0, 65); // h = 0.125
    Grid child(2, 2.0, 33);  // h = 0.125
    ScalarField u = sample_cone(cone, parent);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    const double dt = 0.001;

    FlowState ps;
    ps.field = u;
    FlowState p1 = step_physical(ps, closure, quick_cfg(), 1, dt);
    // transform the stepped parent onto the child lattice: x_child(i) = 2 x maps
    // child index i to parent index 2i
    ScalarField path_a(child);
    std::array<int, kMaxDim> ci{};
    for (std::size_t f = 0; f < path_a.size(); ++f) {
        child.unflatten(f, ci);
        std::array<int, kMaxDim> pi = {2 * ci[0], 2 * ci[1], 0};
        path_a.v[f] = 0.25 * p1.field.v[parent.flatten(pi)];
    }

    ScalarField uc(child);
    for (std::size_t f = 0; f < uc.size(); ++f) {
        child.unflatten(f, ci);
        std::array<int, kMaxDim> pi = {2 * ci[0], 2 * ci[1], 0};
        uc.v[f] = 0.25 * u.v[parent.flatten(pi)];
    }
    FlowState cs;
    cs.field = uc;
    FlowState c1 = step_physical(cs, closure, quick_cfg(), 1, dt / 4.0);

    CHECK(sup_diff_margin(path_a, c1.field, 2) <= 1e-11);
}

TEST_CASE("self-similarity defect vanishes on a self-expanding trajectory") {
    SymMatrix A = SymMatrix::diag({0.5, 0.3});
    ConeSpec cone = ConeSpec::single(A);
    Grid g(2, 4.0, 65);
    // start at t0 = 1 from the expander potential; u(x,t) = C(x) + t*angle
    ScalarField u0 = sample_cone(cone, g);
    for (double& v : u0.v) v += cone.sectors[0].angle_value;
    RunConfig cfg = quick_cfg();
    cfg.horizon = 4.0;
    cfg.margin = 4;
    auto [fin, rep] = run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, 1, {}, 1.0);
    CHECK(rep.snapshot_at(1.0) >= 0);
    CHECK(rep.snapshot_at(4.0) >= 0);
    CHECK(self_similarity_defect(rep, 1.0, 4.0, 4) <= 1e-10);
    CHECK(self_similarity_defect(rep, 4.0, 4.0, 4) == 0.0);
    CHECK_THROWS_AS((void)self_similarity_defect(rep, 1.0, 3.0, 4), usage_error); // no snapshot
    CHECK(fin.time == 4.0);
}

TEST_CASE("implicit step matches the exact quadratic update") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    FlowState s;
    s.field = sample_cone(cone, g);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    const double dt = 0.01;
    FlowState s1 = step_physical_implicit(s, closure, quick_cfg(), dt);
    const double ang = cone.sectors[0].angle_value;
    double worst = 0.0;
    for (std::size_t f = 0; f < s1.field.size(); ++f)
        worst = std::max(worst, std::fabs(s1.field.v[f] - (s.field.v[f] + dt * ang)));
    CHECK(worst <= 1e-8); // inner CG solves to relative residual 1e-10
    CHECK(s1.time == dt);
}

TEST_CASE("engine validates the kind/closure pairing") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    RunConfig cfg = quick_cfg();
    CHECK_THROWS_AS(FlowEngine(FlowKind::physical, BoundaryClosure::expander(cone), cfg),
                    usage_error);
    CHECK_THROWS_AS(FlowEngine(FlowKind::rescaled_expander, BoundaryClosure::shrinker(cone), cfg),
                    usage_error);
    CHECK_THROWS_AS(FlowEngine(FlowKind::normalized_shrinker, BoundaryClosure::expander(cone), cfg),
                    usage_error);
    CHECK_THROWS_AS(FlowEngine(FlowKind::physical, BoundaryClosure::frozen(cone), cfg, 0),
                    usage_error);
}

TEST_CASE("run_flow mark handling") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 17);
    ScalarField u0 = sample_cone(cone, g);
    RunConfig cfg = quick_cfg();
    cfg.horizon = 0.1;
    auto [fin, rep] = run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, 1,
                               {0.05});
    CHECK(fin.time == 0.1);
    CHECK(rep.snapshot_at(0.0) == 0);
    CHECK(rep.snapshot_at(0.05) > 0);
    CHECK(rep.snapshot_at(0.1) > 0);
    REQUIRE(!rep.rows.empty());
    CHECK(rep.rows.front().step == 0);
    CHECK(rep.rows.back().time == 0.1);

    CHECK_THROWS_AS(run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, 1,
                             {0.2}), // beyond the horizon
                    usage_error);
}

TEST_CASE("worker counts do not change the trajectory bitwise") {
    ConeSpec cone = ConeSpec::sign_flip({0.5, 0.3});
    Grid g(2, 2.0, 33);
    ScalarField u0 = sample_cone(cone, g);
    add_compact_bump(u0, {}, 0.01, 0.4);
    RunConfig cfg = quick_cfg();
    cfg.horizon = 0.05;
    auto [f1, r1] = run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, 1);
    auto [f4, r4] = run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, 4);
    REQUIRE(f1.field.v.size() == f4.field.v.size());
    for (std::size_t f = 0; f < f1.field.size(); ++f) CHECK(f1.field.v[f] == f4.field.v[f]);
    REQUIRE(r1.rows.size() == r4.rows.size());
    for (std::size_t r = 0; r < r1.rows.size(); ++r) {
        CHECK(r1.rows[r].residual_sup == r4.rows[r].residual_sup);
        CHECK(r1.rows[r].change_rate == r4.rows[r].change_rate);
    }
}
