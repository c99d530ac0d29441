// Acceptance gate: one PASS/FAIL line per criterion, with the measured
// values. Criteria 1-2 run inline against independent oracles; criteria 3-12
// consume the shared experiment presets (the same code the CLI `preset`
// subcommand runs). Exit status is the number of failing criteria, capped.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "lagflow/sym_matrix.hpp"

using namespace lagflow;
namespace ex = lagflow::experiments;

namespace {

int g_failures = 0;

void line(int k, bool pass, const std::string& detail) {
    std::printf("A%d %s — %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SymMatrix random_sym(std::mt19937& rng, int dim, double radius_cap) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SymMatrix A(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) A.at(i, j) = d(rng);
    double rho = spectral_radius(A);
    if (rho > radius_cap)
        for (double& v : A.a) v *= radius_cap / rho;
    return A;
}

// ---- criterion 1: operator correctness --------------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20260819u);

    // angle vs arg det(I + iA) on 1000 seeded matrices, n in {2,3,4}
    double worst_agree = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        SymMatrix A = random_sym(rng, 2 + trial % 3, 0.9);
        worst_agree = std::max(worst_agree,
                               std::fabs(lagrangian_angle(A) - angle_via_complex_det(A)));
    }

    // orthogonal invariance: angle(Q diag(d) Q^T) = sum arctan d_i
    std::uniform_real_distribution<double> ud(-0.9, 0.9);
    std::uniform_real_distribution<double> uth(0.0, 6.283185307179586);
    double worst_inv = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        double d0 = ud(rng), d1 = ud(rng), d2 = ud(rng);
        double Q[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        auto rot = [&](int p, int q, double th) {
            double c = std::cos(th), s = std::sin(th);
            for (int r = 0; r < 3; ++r) {
                double a = Q[r][p], b = Q[r][q];
                Q[r][p] = c * a - s * b;
                Q[r][q] = s * a + c * b;
            }
        };
        rot(0, 1, uth(rng));
        rot(0, 2, uth(rng));
        rot(1, 2, uth(rng));
        double D[3] = {d0, d1, d2};
        SymMatrix A(3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += Q[i][k] * D[k] * Q[j][k];
                A.at(i, j) = s;
            }
        double want = std::atan(d0) + std::atan(d1) + std::atan(d2);
        worst_inv = std::max(worst_inv, std::fabs(lagrangian_angle(A) - want));
    }

    // oddness: angle(-A) = -angle(A)
    double worst_odd = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        SymMatrix A = random_sym(rng, 2 + trial % 3, 0.95);
        SymMatrix N = A;
        for (double& v : N.a) v = -v;
        worst_odd = std::max(worst_odd, std::fabs(lagrangian_angle(A) + lagrangian_angle(N)));
    }

    double secs = seconds_since(t0);
    bool pass = worst_agree <= 1e-12 && worst_inv <= 1e-12 && worst_odd <= 1e-13 && secs < 5.0;
    line(1, pass,
         "angle vs arg det(I+iA) max " + fmt(worst_agree) + " (tol 1e-12); invariance max " +
             fmt(worst_inv) + " (tol 1e-12); oddness max " + fmt(worst_odd) + " (tol 1e-13); " +
             fmt(secs) + " s");
}

// ---- criterion 2: linearization gradient check ------------------------------

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(7117u);
    const double eps = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 2 + trial % 3;
        SymMatrix A = random_sym(rng, dim, 0.8);
        SymMatrix B = random_sym(rng, dim, 1.0);
        SymMatrix Ap = A, Am = A;
        for (std::size_t k = 0; k < A.a.size(); ++k) {
            Ap.a[k] += eps * B.a[k];
            Am.a[k] -= eps * B.a[k];
        }
        double fd = (lagrangian_angle(Ap) - lagrangian_angle(Am)) / (2.0 * eps);
        double tr = directional_derivative(linearization(A), B);
        worst = std::max(worst, std::fabs(fd - tr));
    }
    double secs = seconds_since(t0);
    bool pass = worst <= 1e-8 && secs < 5.0;
    line(2, pass,
         "trace form vs central differences max " + fmt(worst) + " (tol 1e-8, eps 1e-5, 200 pairs); " +
             fmt(secs) + " s");
}

// ---- criteria 3-12: experiment presets --------------------------------------

struct TimedResult {
    ex::ExperimentResult result;
    double secs = 0.0;
    std::string error; // non-empty when the experiment itself threw
};

TimedResult run_timed(const char* name, ex::ExperimentResult (*fn)(const std::string&, int),
                      const std::string& out_dir, int workers) {
    TimedResult tr;
    auto t0 = std::chrono::steady_clock::now();
    try {
        tr.result = fn(out_dir, workers);
    } catch (const std::exception& e) {
        tr.error = std::string(name) + " threw: " + e.what();
    }
    tr.secs = seconds_since(t0);
    return tr;
}

std::string check_detail(const ex::ExperimentResult& r, const std::string& label) {
    for (const auto& c : r.checks)
        if (c.label == label) return c.detail;
    return "check '" + label + "' missing";
}

} // namespace

int main() {
    const std::string out = "acceptance_out";
    const int workers = 2;

    criterion_1();
    criterion_2();

    TimedResult quad = run_timed("quadratic-flow", ex::quadratic_flow, out, workers);
    TimedResult expd = run_timed("paper-expander", ex::paper_expander, out, workers);
    TimedResult bump = run_timed("cone-bump-flow", ex::cone_bump_flow, out, workers);
    TimedResult shrk = run_timed("shrinker-probe", ex::shrinker_probe, out, workers);
    TimedResult trns = run_timed("translator", ex::translator_check, out, workers);
    TimedResult conv = run_timed("convergence", ex::convergence_study, out, workers);

    // 3: exact quadratic flow against the arctan-oracle constant
    if (!quad.error.empty()) {
        line(3, false, quad.error);
    } else {
        bool pass = quad.result.passed("exact_error") && quad.secs < 120.0;
        line(3, pass, check_detail(quad.result, "exact_error") + "; " + fmt(quad.secs) + " s");
    }

    // 4: expander construction reaches the residual budget, non-quadratic
    if (!expd.error.empty()) {
        line(4, false, expd.error);
        line(5, false, "not evaluated: expander construction failed");
    } else {
        bool pass4 = expd.result.passed("residual") && expd.result.passed("d3_nontrivial") &&
                     expd.secs < 600.0;
        line(4, pass4,
             check_detail(expd.result, "residual") + "; " +
                 check_detail(expd.result, "d3_nontrivial") + "; " + fmt(expd.secs) +
                 " s for the construction bundle");
        // 5: correspondence round trip on the same output
        line(5, expd.result.passed("roundtrip"), check_detail(expd.result, "roundtrip"));
    }

    // 6: self-similarity defect decreasing from cone-plus-bump data
    if (!bump.error.empty()) {
        line(6, false, bump.error);
    } else {
        bool pass = bump.result.passed("defect_decreasing") && bump.result.passed("defect_final") &&
                    bump.secs < 900.0;
        line(6, pass,
             check_detail(bump.result, "defect_decreasing") + "; " +
                 check_detail(bump.result, "defect_final") + "; " + fmt(bump.secs) + " s");
    }

    // 7: shrinker triviality probe
    if (!shrk.error.empty()) {
        line(7, false, shrk.error);
    } else {
        bool pass = shrk.result.passed("d3_decay") && shrk.result.passed("fit_monotone") &&
                    shrk.secs < 600.0;
        line(7, pass,
             check_detail(shrk.result, "d3_decay") + "; " +
                 check_detail(shrk.result, "fit_monotone") + "; " + fmt(shrk.secs) + " s");
    }

    // 8: Condition A preserved across the runs of criteria 3-7 (the
    // translator run is held to the same bound)
    {
        struct Src {
            const char* tag;
            const TimedResult* tr;
        } srcs[] = {{"quadratic", &quad}, {"expander", &expd}, {"bump", &bump},
                    {"shrinker", &shrk}, {"translator", &trns}};
        bool pass = true;
        std::ostringstream detail;
        for (const Src& s : srcs) {
            bool ok = s.tr->error.empty() && s.tr->result.passed("condition_a_rows");
            pass = pass && ok;
            if (!detail.str().empty()) detail << ", ";
            detail << s.tag << " sup " << fmt(s.tr->result.metric("hess_sup")) << "/"
                   << fmt(s.tr->result.metric("hess_bound")) << (ok ? "" : " VIOLATED");
        }
        line(8, pass, detail.str());
    }

    // 9: derivative decay monitor on the criterion-6 run
    if (!bump.error.empty()) {
        line(9, false, bump.error);
    } else {
        line(9, bump.result.passed("decay_trend"),
             check_detail(bump.result, "decay_trend") + "; recorded constant " +
                 fmt(bump.result.metric("decay_constant")));
    }

    // 10: translator identity
    if (!trns.error.empty()) {
        line(10, false, trns.error);
    } else {
        bool pass = trns.result.passed("static_residual") && trns.result.passed("dynamic_defect") &&
                    trns.secs < 120.0;
        line(10, pass,
             check_detail(trns.result, "static_residual") + "; " +
                 check_detail(trns.result, "dynamic_defect") + "; " + fmt(trns.secs) + " s");
    }

    // 11: worker-count determinism of the criterion-4 flow
    if (!expd.error.empty()) {
        line(11, false, expd.error);
    } else {
        line(11, expd.result.passed("determinism"), check_detail(expd.result, "determinism"));
    }

    // 12: convergence study (h-halving order, R-doubling stability)
    if (!conv.error.empty()) {
        line(12, false, conv.error);
    } else {
        bool pass = conv.result.passed("order") && conv.result.passed("domain_ratio") &&
                    conv.secs < 1200.0;
        line(12, pass,
             check_detail(conv.result, "order") + "; " + check_detail(conv.result, "domain_ratio") +
                 "; " + fmt(conv.secs) + " s");
    }

    if (g_failures == 0) {
        std::printf("all 12 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return g_failures > 125 ? 125 : g_failures;
}
