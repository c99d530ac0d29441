// Discrete differential operators: exactness on quadratics, measured h^2
// truncation order on smooth non-polynomial data, and the pointwise residual
// identities on exact soliton potentials.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "lagflow/closure.hpp"
#include "lagflow/cone.hpp"
#include "lagflow/stencils.hpp"

using namespace lagflow;

namespace {

ScalarField sample(const Grid& g, double (*f)(double, double)) {
    ScalarField u(g);
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
        g.unflatten(flat, idx);
        g.coords_of(idx, x);
        u.v[flat] = f(x[0], x[1]);
    }
    return u;
}

double sup_plane_error(const HessianField& H, int p, double want, int margin) {
    const Grid& g = H.grid;
    double worst = 0.0;
    std::array<int, kMaxDim> idx{};
    for (std::size_t flat = 0; flat < g.num_points(); ++flat) {
        g.unflatten(flat, idx);
        if (!g.in_margin_interior(idx, margin)) continue;
        worst = std::max(worst, std::fabs(H.plane(p)[flat] - want));
    }
    return worst;
}

} // namespace

TEST_CASE("hessian exact on a sampled quadratic cone, ghosts included") {
    SymMatrix A(2);
    A.at(0, 0) = 0.5;
    A.at(1, 1) = 0.3;
    A.at(0, 1) = 0.1;
    ConeSpec cone = ConeSpec::single(A);
    Grid g(2, 1.5, 21);
    ScalarField u = sample_cone(cone, g);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    HessianField H = hessian(u, at_time(closure, 0.0));
    CHECK(sup_plane_error(H, 0, 0.5, 0) <= 1e-12); // whole lattice, boundary rows via ghosts
    CHECK(sup_plane_error(H, 1, 0.3, 0) <= 1e-12);
    CHECK(sup_plane_error(H, 2, 0.1, 0) <= 1e-12);
}

TEST_CASE("hessian_interior ignores affine parts") {
    Grid g(2, 1.5, 21);
    ScalarField u = sample(g, [](double x, double y) {
        return 0.25 * x * x + 0.15 * y * y + 0.1 * x * y + 0.7 * x - 0.2 * y + 3.0;
    });
    HessianField H = hessian_interior(u);
    CHECK(sup_plane_error(H, 0, 0.5, 1) <= 1e-12);
    CHECK(sup_plane_error(H, 1, 0.3, 1) <= 1e-12);
    CHECK(sup_plane_error(H, 2, 0.1, 1) <= 1e-12);
}

TEST_CASE("gradient exact on quadratics") {
    SymMatrix A = SymMatrix::diag({0.5, 0.3});
    ConeSpec cone = ConeSpec::single(A);
    Grid g(2, 1.5, 21);
    ScalarField u = sample_cone(cone, g);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    VectorField du = gradient(u, at_time(closure, 0.0));
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    double worst = 0.0;
    for (std::size_t flat = 0; flat < g.num_points(); ++flat) {
        g.unflatten(flat, idx);
        g.coords_of(idx, x);
        worst = std::max(worst, std::fabs(du.plane(0)[flat] - 0.5 * x[0]));
        worst = std::max(worst, std::fabs(du.plane(1)[flat] - 0.3 * x[1]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("second-difference truncation error is O(h^2)") {
    // u(x) = sin(1 + x); the interior Hessian error should shrink by ~4x when
    // h is halved.
    auto f = [](double x, double) { return std::sin(1.0 + x); };
    auto measure = [&](int m) {
        Grid g(1, 1.0, m);
        ScalarField u(g);
        for (int i = 0; i < m; ++i) u.v[static_cast<std::size_t>(i)] = f(g.coord(i), 0.0);
        HessianField H = hessian_interior(u);
        double worst = 0.0;
        for (int i = 1; i + 1 < m; ++i) {
            double want = -std::sin(1.0 + g.coord(i));
            worst = std::max(worst, std::fabs(H.plane(0)[static_cast<std::size_t>(i)] - want));
        }
        return worst;
    };
    double e1 = measure(201);  // h = 0.01
    double e2 = measure(401);  // h = 0.005
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("cross-difference truncation error is O(h^2)") {
    auto measure = [](int m) {
        Grid g(2, 1.0, m);
        ScalarField u = sample(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
        HessianField H = hessian_interior(u);
        double worst = 0.0;
        std::array<int, kMaxDim> idx{};
        std::array<double, kMaxDim> x{};
        for (std::size_t flat = 0; flat < g.num_points(); ++flat) {
            g.unflatten(flat, idx);
            if (!g.in_margin_interior(idx, 1)) continue;
            g.coords_of(idx, x);
            double want = std::cos(x[0]) * std::cos(x[1]);
            worst = std::max(worst, std::fabs(H.plane(2)[flat] - want));
        }
        return worst;
    };
    double e1 = measure(101); // h = 0.02
    double e2 = measure(201); // h = 0.01
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("angle_field matches the sector angle on quadratic data") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 1.5, 17);
    ScalarField u = sample_cone(cone, g);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    ScalarField ang = angle_field(hessian(u, at_time(closure, 0.0)));
    const double want = cone.sectors[0].angle_value;
    double worst = 0.0;
    for (std::size_t f = 0; f < ang.size(); ++f) worst = std::max(worst, std::fabs(ang.v[f] - want));
    CHECK(worst <= 1e-12);
}

TEST_CASE("soliton residual identities vanish on exact quadratic solitons") {
    SymMatrix A = SymMatrix::diag({0.5, 0.3});
    ConeSpec cone = ConeSpec::single(A);
    Grid g(2, 1.5, 17);
    const double ang = cone.sectors[0].angle_value;

    // expander: v = C + angle, residual G - v + (1/2) x . grad v
    {
        ScalarField v = sample_cone(cone, g);
        for (double& q : v.v) q += ang;
        BoundaryClosure closure = BoundaryClosure::expander(cone);
        ScalarField r = expander_residual(v, at_time(closure, 0.0));
        CHECK(sup_abs_interior(r, 0) <= 1e-12);
    }
    // shrinker: w = C - angle, residual G + w - (1/2) x . grad w
    {
        ScalarField w = sample_cone(cone, g);
        for (double& q : w.v) q -= ang;
        BoundaryClosure closure = BoundaryClosure::shrinker(cone);
        ScalarField r = shrinker_residual(w, at_time(closure, 0.0));
        CHECK(sup_abs_interior(r, 0) <= 1e-12);
    }
    // translator: u0 = C, a arbitrary, b = A a, c = angle
    {
        ScalarField u0 = sample_cone(cone, g);
        std::array<double, kMaxDim> a = {0.4, -0.2, 0.0};
        std::array<double, kMaxDim> b = {0.5 * 0.4, 0.3 * -0.2, 0.0};
        BoundaryClosure closure = BoundaryClosure::frozen(cone);
        ScalarField r = translator_residual(u0, a, b, ang, at_time(closure, 0.0));
        CHECK(sup_abs_interior(r, 0) <= 1e-12);
    }
}

TEST_CASE("sign-flip cone exposes both sector Hessians") {
    ConeSpec cone = ConeSpec::sign_flip({0.5, 0.3});
    Grid g(2, 2.0, 33);
    ScalarField u = sample_cone(cone, g);
    HessianField H = hessian_interior(u);
    // pick cells one lattice step clear of the x1 = 0 interface
    std::array<int, kMaxDim> idx = {24, 16, 0}; // x1 = +1.0
    CHECK(H.plane(0)[g.flatten(idx)] == doctest::Approx(0.5).epsilon(1e-12));
    idx[0] = 8; // x1 = -1.0
    CHECK(H.plane(0)[g.flatten(idx)] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(H.plane(1)[g.flatten(idx)] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("sup_abs_interior margin semantics") {
    Grid g(2, 1.0, 9);
    ScalarField f(g);
    std::array<int, kMaxDim> corner = {0, 0, 0};
    f.v[g.flatten(corner)] = 7.0; // on the boundary shell
    std::array<int, kMaxDim> inner = {4, 4, 0};
    f.v[g.flatten(inner)] = 2.0;
    CHECK(sup_abs_interior(f, 0) == 7.0);
    CHECK(sup_abs_interior(f, 1) == 2.0);
    CHECK_THROWS_AS((void)sup_abs_interior(f, -1), usage_error);
    CHECK_THROWS_AS((void)sup_abs_interior(f, 5), usage_error); // 2*margin >= m
}

TEST_CASE("stencils demand a closure at the boundary") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 1.0, 9);
    ScalarField u = sample_cone(cone, g);
    BoundaryClosure none = BoundaryClosure::disabled();
    CHECK_THROWS_AS((void)hessian(u, at_time(none, 0.0)), usage_error);
}
