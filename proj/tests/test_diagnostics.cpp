// Diagnostics: the third-difference tensor norm, Hessian range, minimality
// defect, Condition A checks, the decay monitor and the graph export.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "lagflow/diagnostics.hpp"
#include "lagflow/io.hpp"
#include "lagflow/stencils.hpp"

using namespace lagflow;

namespace {

std::string tmp_path(const std::string& name) {
    static const std::filesystem::path dir = [] {
        auto p = std::filesystem::temp_directory_path() / "lagflow_test_diag";
        std::filesystem::create_directories(p);
        return p;
    }();
    return (dir / name).string();
}

ScalarField sample2(const Grid& g, double (*f)(double, double)) {
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

GhostView no_ghost() { return GhostView{nullptr, 0.0}; }

} // namespace

TEST_CASE("d3_sup is exact on cubics") {
    // u = a x^3 + b x^2 y + c y^3: constant third derivatives
    // (u_xxx, u_xxy, u_xyy, u_yyy) = (6a, 2b, 0, 6c); tensor norm uses
    // multiplicities 1 / 3 / 3 / 1.
    const double a = 0.1, b = 0.05, c = 0.02;
    Grid g(2, 1.0, 21);
    ScalarField u = sample2(g, [](double x, double y) {
        return 0.1 * x * x * x + 0.05 * x * x * y + 0.02 * y * y * y;
    });
    const double want =
        std::sqrt(36.0 * a * a + 3.0 * (2.0 * b) * (2.0 * b) + 36.0 * c * c);
    CHECK(std::fabs(d3_sup(u, no_ghost(), 2) - want) <= 1e-10);
}

TEST_CASE("d3_sup annihilates quadratics") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    ScalarField u = sample_cone(cone, g);
    // Pure cancellation roundoff: ~6 eps |u| / h^3 per component, times the
    // sqrt(8) tensor-norm factor; |u| <= 1.6 here and ~6.8 with the affine
    // part below.
    CHECK(d3_sup(u, no_ghost(), 2) <= 5e-12);
    // affine parts change nothing
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    for (std::size_t f = 0; f < u.size(); ++f) {
        g.unflatten(f, idx);
        g.coords_of(idx, x);
        u.v[f] += 0.7 * x[0] - 0.2 * x[1] + 3.0;
    }
    CHECK(d3_sup(u, no_ghost(), 2) <= 2e-11);
    // margin 1 reaches the boundary shell and needs the ghost closure
    BoundaryClosure closure = BoundaryClosure::frozen(cone);
    ScalarField uc = sample_cone(cone, g);
    CHECK(d3_sup(uc, at_time(closure, 0.0), 1) <= 1e-11);

    Grid small(2, 1.0, 5);
    ScalarField us(small);
    CHECK_THROWS_AS((void)d3_sup(us, no_ghost(), 1), usage_error); // m < 7
}

TEST_CASE("hessian_range brackets the sampled spectrum") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    ScalarField u = sample_cone(cone, g);
    auto [lo, hi] = hessian_range(u, 2);
    CHECK(lo == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("minimality defect is zero exactly on constant-angle data") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    ScalarField u = sample_cone(cone, g);
    CHECK(minimality_defect(u, no_ghost(), 1) <= 1e-12);
    // a sign-flip cone has two angle plateaus; the defect sees the spread
    ScalarField w = sample_cone(ConeSpec::sign_flip({0.5, 0.3}), g);
    CHECK(minimality_defect(w, no_ghost(), 1) >= 0.4);
}

TEST_CASE("check_condition_a pass, fail and validation") {
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    Grid g(2, 2.0, 33);
    ScalarField u = sample_cone(cone, g);
    BoundaryClosure closure = BoundaryClosure::frozen(cone);

    ConditionA ok = check_condition_a(u, 0.5, at_time(closure, 0.0));
    CHECK(ok.pass);
    CHECK(std::fabs(ok.margin) <= 1e-11); // rho = 0.5 right at the bound

    ConditionA bad = check_condition_a(u, 0.6, at_time(closure, 0.0));
    CHECK(!bad.pass);
    CHECK(bad.margin == doctest::Approx(-0.1).epsilon(1e-9));

    // without a closure the check restricts to the 1-cell interior
    ConditionA noghost = check_condition_a(u, 0.5, no_ghost());
    CHECK(noghost.pass);
    CHECK(std::fabs(noghost.margin - ok.margin) <= 1e-11);

    CHECK_THROWS_AS((void)check_condition_a(u, 0.0, no_ghost()), usage_error);
    CHECK_THROWS_AS((void)check_condition_a(u, 1.0, no_ghost()), usage_error);
}

TEST_CASE("decay monitor reads the report trend") {
    FlowReport rep;
    auto row = [](long step, double t, double d3st) {
        ReportRow r;
        r.step = step;
        r.time = t;
        r.d3_sqrt_t = d3st;
        return r;
    };
    rep.rows = {row(0, 0.0, 0.0), row(5, 0.1, 2.0), row(10, 0.2, 1.0), row(20, 0.4, 0.9),
                row(30, 0.8, 0.5)};
    DecayMonitor mon = decay_monitor(rep, 3);
    CHECK(mon.empirical_constant == 2.0); // sup over all t > 0 rows
    CHECK(mon.non_increasing);            // trend judged after the 10-step transient

    rep.rows.push_back(row(40, 1.6, 0.7)); // late increase breaks the trend
    CHECK(!decay_monitor(rep, 3).non_increasing);

    CHECK_THROWS_AS((void)decay_monitor(rep, 2), usage_error); // only l = 3 supported
    FlowReport tiny;
    tiny.rows = {row(0, 0.0, 0.0)};
    CHECK_THROWS_AS((void)decay_monitor(tiny, 3), usage_error);
    FlowReport no_tail;
    no_tail.rows = {row(0, 0.0, 0.0), row(5, 0.1, 1.0), row(8, 0.2, 0.9)};
    CHECK_THROWS_AS((void)decay_monitor(no_tail, 3), usage_error); // nothing past the transient
}

TEST_CASE("graph export writes the margin-interior point cloud") {
    Grid g(1, 1.0, 5);
    ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5}));
    ScalarField u = sample_cone(cone, g);
    const std::string path = tmp_path("graph.csv");
    graph_export(u, no_ghost(), path, 1);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x0,du0");
    int rows = 0;
    double worst = 0.0;
    while (std::getline(in, line)) {
        std::size_t comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        double x = parse_double(line.substr(0, comma));
        double du = parse_double(line.substr(comma + 1));
        worst = std::max(worst, std::fabs(du - 0.5 * x));
        ++rows;
    }
    CHECK(rows == 3); // (m - 2 margin)^1
    CHECK(worst <= 1e-14);

    CHECK_THROWS_AS(graph_export(u, no_ghost(), "/nonexistent_dir/out.csv", 1), usage_error);
}
