#include "lagflow/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "interior_ops.hpp"
#include "lagflow/diagnostics.hpp"
#include "lagflow/io.hpp"
#include "lagflow/stencils.hpp"

namespace lagflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void fill_common_provenance(std::map<std::string, std::string>& p, const Grid& g,
                            const RunConfig& cfg, int workers) {
    p["grid.dim"] = std::to_string(g.dim);
    p["grid.m"] = std::to_string(g.m);
    p["grid.R"] = format_sig17(g.radius);
    p["config.delta"] = format_sig17(cfg.delta);
    p["config.dt_safety"] = format_sig17(cfg.dt_safety);
    p["config.horizon"] = format_sig17(cfg.horizon);
    p["config.margin"] = std::to_string(cfg.margin);
    p["config.residual_tol"] = format_sig17(cfg.residual_tol);
    p["config.stationarity_tol"] = format_sig17(cfg.stationarity_tol);
    p["run.workers"] = std::to_string(workers);
}

// Dense Cholesky solve (tiny systems only: the quadratic-fit Gram matrix).
void cholesky_solve(std::vector<double>& A, std::vector<double>& b, int p) {
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A[static_cast<std::size_t>(i) * p + j];
            for (int k = 0; k < j; ++k)
                s -= A[static_cast<std::size_t>(i) * p + k] * A[static_cast<std::size_t>(j) * p + k];
            if (i == j) {
                if (!(s > 0.0)) throw numerical_error("quadratic fit: Gram matrix not positive definite");
                A[static_cast<std::size_t>(i) * p + j] = std::sqrt(s);
            } else {
                A[static_cast<std::size_t>(i) * p + j] = s / A[static_cast<std::size_t>(j) * p + j];
            }
        }
    }
    for (int i = 0; i < p; ++i) { // forward
        double s = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= A[static_cast<std::size_t>(i) * p + k] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / A[static_cast<std::size_t>(i) * p + i];
    }
    for (int i = p - 1; i >= 0; --i) { // backward
        double s = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < p; ++k) s -= A[static_cast<std::size_t>(k) * p + i] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / A[static_cast<std::size_t>(i) * p + i];
    }
}

// Quadratic monomial basis 1, x_d, x_i x_j (i <= j) evaluated at x.
int quad_basis(const Grid& g, const std::array<double, kMaxDim>& x, double* phi) {
    int p = 0;
    phi[p++] = 1.0;
    for (int d = 0; d < g.dim; ++d) phi[p++] = x[static_cast<std::size_t>(d)];
    for (int i = 0; i < g.dim; ++i)
        for (int j = i; j < g.dim; ++j)
            phi[p++] = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    return p;
}

} // namespace

QuadraticSoliton quadratic_soliton(const SymMatrix& A, SolitonKind kind) {
    if (A.n < 1 || A.n > kMaxDim) throw usage_error("quadratic_soliton: dimension must be 1..3");
    if (!(spectral_radius(A) < 1.0))
        throw usage_error("quadratic_soliton: spectral radius of A must be below 1");
    QuadraticSoliton q;
    q.A = A;
    q.kind = kind;
    q.constant = (kind == SolitonKind::expander ? 1.0 : -1.0) * lagrangian_angle(A);
    return q;
}

ScalarField sample_soliton(const QuadraticSoliton& q, const Grid& grid) {
    ScalarField u = sample_cone(ConeSpec::single(q.A), grid);
    for (double& v : u.v) v += q.constant;
    return u;
}

std::pair<ScalarField, SolitonCertificate> make_expander(const ConeSpec& cone, const Grid& grid,
                                                         const RunConfig& cfg, int workers) {
    cfg.validate();
    const ScalarField u0 = sample_cone(cone, grid);
    // The relaxing pin matches raw cone data at s = 0 and converges to the
    // stationary expander values; a stationary pin here would start with an
    // O(angle) jump at the ring.
    const BoundaryClosure closure = BoundaryClosure::expander_relaxed(cone);

    const double margin0 = cone_pinching_margin(cone, cfg.delta);
    if (margin0 < 0.0)
        throw usage_error("make_expander: cone data violates Condition A (margin = " +
                          fmt(margin0) + ")");

    auto [fin, rep] = run_flow(u0, closure, cfg, FlowKind::rescaled_expander, workers);

    const GhostView gv = at_time(closure, fin.time);
    SolitonCertificate cert;
    cert.kind = "expander";
    cert.residual_field = expander_residual(fin.field, gv);
    cert.residual_sup_interior = sup_abs_interior(cert.residual_field, cfg.margin);
    cert.condition_a_margin = check_condition_a(fin.field, cfg.delta, gv, cfg.margin).margin;
    cert.d3_sup = d3_sup(fin.field, gv, cfg.margin);
    fill_common_provenance(cert.provenance, grid, cfg, workers);
    cert.provenance["run.steps"] = std::to_string(fin.step_count);
    cert.provenance["run.final_s"] = format_sig17(fin.time);
    cert.provenance["run.stop_reason"] = rep.stopped_early ? rep.stop_reason : "horizon";

    if (cert.residual_sup_interior > cfg.residual_tol)
        throw tolerance_error("make_expander: interior residual " + fmt(cert.residual_sup_interior) +
                              " still above tolerance " + fmt(cfg.residual_tol) + " at s = " +
                              fmt(fin.time));
    return {std::move(fin.field), std::move(cert)};
}

ScalarField cone_of_expander(const ScalarField& v, int margin) {
    const Grid& g = v.grid;
    if (margin < 1) throw usage_error("cone_of_expander: margin must be >= 1");
    const double r = g.radius - static_cast<double>(margin) * g.h;
    if (!(r > g.h)) throw usage_error("cone_of_expander: margin leaves no usable radius");

    // Discrete origin Hessian, for the degenerate cells within one parent
    // cell of x = 0 where the radial extrapolation is ill-conditioned.
    const std::size_t o = g.origin_flat();
    const double ih2 = 1.0 / (g.h * g.h);
    const double i4h2 = 1.0 / (4.0 * g.h * g.h);
    SymMatrix H0(g.dim);
    for (int d = 0; d < g.dim; ++d) {
        const std::size_t s = static_cast<std::size_t>(g.stride(d));
        H0.at(d, d) = ih2 * ((v.at(o - s) + v.at(o + s)) - 2.0 * v.at(o));
    }
    for (int d = 0; d < g.dim; ++d)
        for (int e = d + 1; e < g.dim; ++e) {
            const std::size_t sd = static_cast<std::size_t>(g.stride(d));
            const std::size_t se = static_cast<std::size_t>(g.stride(e));
            H0.at(d, e) = i4h2 * ((v.at(o + sd + se) + v.at(o - sd - se)) -
                                  (v.at(o + sd - se) + v.at(o - sd + se)));
        }

    // Unit-scale window, reusing the parent resolution when it is finer.
    const int half = std::max(2, static_cast<int>(std::floor(1.0 / g.h)));
    const Grid wg(g.dim, 1.0, 2 * half + 1);

    ScalarField out(wg);
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{}, y{};
    for (std::size_t f = 0; f < wg.num_points(); ++f) {
        wg.unflatten(f, idx);
        wg.coords_of(idx, x);
        double rho2 = 0.0;
        for (int d = 0; d < g.dim; ++d) rho2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
        const double rho = std::sqrt(rho2);
        if (rho < g.h) {
            double q = 0.0;
            for (int i = 0; i < g.dim; ++i)
                for (int j = 0; j < g.dim; ++j)
                    q += x[static_cast<std::size_t>(i)] * H0.at(i, j) * x[static_cast<std::size_t>(j)];
            out.v[f] = 0.5 * q;
            continue;
        }
        // Radial representative at |y|_2 = r, scaled back by 2-homogeneity.
        const double scale = rho / r;
        for (int d = 0; d < g.dim; ++d) y[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)] / scale;
        out.v[f] = scale * scale * multilinear_interpolate(v, y);
    }
    return out;
}

double quadratic_fit_distance(const ScalarField& u, int margin) {
    const Grid& g = u.grid;
    if (margin < 1 || g.m - 2 * margin < 3)
        throw usage_error("quadratic_fit_distance: margin leaves too small a window");
    const int p = 1 + g.dim + g.dim * (g.dim + 1) / 2;

    // Gaussian-weighted least squares with the shrinker weight e^{-|x|^2/4}:
    // in this norm the drift part of the normalized flow is self-adjoint and
    // degree-k perturbations decay like e^{(1 - k/2)s}, so the distance is
    // the quantity that actually shrinks monotonically. An unweighted fit
    // would transiently GROW while a perturbation is transported outward
    // (amplitude e^s beats spreading e^{s/2} on a fixed window).
    auto weight = [](const std::array<double, kMaxDim>& x, int dim) {
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
        return std::exp(-0.25 * r2);
    };

    std::vector<double> gram(static_cast<std::size_t>(p) * p, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(p), 0.0);
    double phi[10] = {};
    detail::for_each_margin_cell(g, margin, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        std::array<double, kMaxDim> x{};
        g.coords_of(idx, x);
        const double w = weight(x, g.dim);
        quad_basis(g, x, phi);
        for (int i = 0; i < p; ++i) {
            rhs[static_cast<std::size_t>(i)] += w * u.at(f) * phi[i];
            for (int j = 0; j <= i; ++j)
                gram[static_cast<std::size_t>(i) * p + j] += w * phi[i] * phi[j];
        }
    });
    cholesky_solve(gram, rhs, p);

    double num = 0.0, den = 0.0;
    detail::for_each_margin_cell(g, margin, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        std::array<double, kMaxDim> x{};
        g.coords_of(idx, x);
        const double w = weight(x, g.dim);
        quad_basis(g, x, phi);
        double q = 0.0;
        for (int i = 0; i < p; ++i) q += rhs[static_cast<std::size_t>(i)] * phi[i];
        const double d = u.at(f) - q;
        num += w * d * d;
        den += w;
    });
    return std::sqrt(num / den);
}

ShrinkerProbe probe_shrinker(const ScalarField& w0, const QuadraticSoliton& reference,
                             const RunConfig& cfg, int workers, std::vector<double> marks) {
    cfg.validate();
    if (reference.kind != SolitonKind::shrinker)
        throw usage_error("probe_shrinker: reference must be a shrinker soliton");
    if (reference.A.n != w0.grid.dim)
        throw usage_error("probe_shrinker: reference dimension does not match the field");

    const BoundaryClosure closure = BoundaryClosure::shrinker(ConeSpec::single(reference.A));
    const ConditionA cond0 = check_condition_a(w0, cfg.delta, at_time(closure, 0.0));
    if (!cond0.pass)
        throw usage_error("probe_shrinker: initial data violates Condition A (margin = " +
                          fmt(cond0.margin) + ")");

    if (marks.empty())
        for (int k = 1; k <= 10; ++k) marks.push_back(cfg.horizon * (static_cast<double>(k) / 10.0));

    FlowEngine engine(FlowKind::normalized_shrinker, closure, cfg, workers);
    engine.start(w0);
    engine.set_gauge_reference(reference.constant, std::array<double, kMaxDim>{});

    ShrinkerProbe probe;
    probe.report = engine.run(marks);
    for (const Snapshot& s : probe.report.snapshots)
        probe.fit_distances.push_back(quadratic_fit_distance(s.field, cfg.margin));
    probe.d3_initial = probe.report.rows.front().d3_sup;
    probe.d3_final = probe.report.rows.back().d3_sup;

    const GhostView gv = at_time(closure, engine.time());
    probe.cert.kind = "shrinker-probe";
    probe.cert.residual_field = shrinker_residual(engine.field(), gv);
    probe.cert.residual_sup_interior = sup_abs_interior(probe.cert.residual_field, cfg.margin);
    probe.cert.condition_a_margin = check_condition_a(engine.field(), cfg.delta, gv, cfg.margin).margin;
    probe.cert.d3_sup = probe.d3_final;
    fill_common_provenance(probe.cert.provenance, w0.grid, cfg, workers);
    probe.cert.provenance["run.steps"] = std::to_string(engine.step_count());
    probe.cert.provenance["run.final_s"] = format_sig17(engine.time());
    probe.cert.provenance["run.stop_reason"] =
        probe.report.stopped_early ? probe.report.stop_reason : "horizon";
    probe.cert.provenance["fit.final_distance"] =
        format_sig17(probe.fit_distances.empty() ? 0.0 : probe.fit_distances.back());
    return probe;
}

double check_condition_b(const ScalarField& u) {
    const Grid& g = u.grid;
    if (g.m < 9) throw usage_error("check_condition_b: needs at least 9 points per axis");
    const int o = g.origin_index();

    double dev = 0.0;
    std::array<int, kMaxDim> idx{}, jdx{};
    for (int lam = 2; lam <= 4; ++lam) {
        const double inv = 1.0 / (static_cast<double>(lam) * static_cast<double>(lam));
        for (std::size_t f = 0; f < g.num_points(); ++f) {
            g.unflatten(f, idx);
            bool usable = true;
            for (int d = 0; d < g.dim; ++d) {
                const int j = o + lam * (idx[static_cast<std::size_t>(d)] - o);
                if (j < 0 || j >= g.m) {
                    usable = false;
                    break;
                }
                jdx[static_cast<std::size_t>(d)] = j;
            }
            for (int d = g.dim; d < kMaxDim; ++d) jdx[static_cast<std::size_t>(d)] = 0;
            if (!usable) continue;
            const double d = std::fabs(inv * u.at(g.flatten(jdx)) - u.at(f));
            if (d > dev) dev = d;
        }
    }
    return dev;
}

BlowdownResult blowdown(const ScalarField& u, const std::vector<double>& lambdas) {
    const Grid& g = u.grid;
    if (lambdas.empty()) throw usage_error("blowdown: needs at least one lambda");

    BlowdownResult out;
    for (double lam : lambdas) {
        if (!(lam >= 1.0)) throw usage_error("blowdown: lambda must be >= 1");
        const int half = static_cast<int>(std::floor(static_cast<double>(g.m - 1) / (2.0 * lam)));
        const int mw = 2 * half + 1;
        if (mw < 5) continue; // window too small to be a grid; skip this lambda
        const Grid wg(g.dim, 0.5 * static_cast<double>(mw - 1) * g.h, mw);

        ScalarField w(wg);
        const bool integer = std::floor(lam) == lam;
        const long ilam = static_cast<long>(lam);
        const int o = g.origin_index();
        const int ow = wg.origin_index();
        std::array<int, kMaxDim> idx{}, jdx{};
        std::array<double, kMaxDim> x{}, y{};
        const double inv = 1.0 / (lam * lam);
        for (std::size_t f = 0; f < wg.num_points(); ++f) {
            wg.unflatten(f, idx);
            if (integer) {
                // lambda * (window node) is itself a parent lattice node.
                for (int d = 0; d < g.dim; ++d)
                    jdx[static_cast<std::size_t>(d)] =
                        o + static_cast<int>(ilam) * (idx[static_cast<std::size_t>(d)] - ow);
                for (int d = g.dim; d < kMaxDim; ++d) jdx[static_cast<std::size_t>(d)] = 0;
                w.v[f] = inv * u.at(g.flatten(jdx));
            } else {
                wg.coords_of(idx, x);
                for (int d = 0; d < g.dim; ++d) {
                    double yd = lam * x[static_cast<std::size_t>(d)];
                    // The window construction keeps lambda*x inside the parent
                    // domain; clamp the roundoff spill at the rim.
                    if (yd > g.radius) yd = g.radius;
                    if (yd < -g.radius) yd = -g.radius;
                    y[static_cast<std::size_t>(d)] = yd;
                }
                for (int d = g.dim; d < kMaxDim; ++d) y[static_cast<std::size_t>(d)] = 0.0;
                w.v[f] = inv * multilinear_interpolate(u, y);
            }
        }
        out.lambdas.push_back(lam);
        out.fields.push_back(std::move(w));
    }
    if (out.fields.empty())
        throw usage_error("blowdown: no lambda leaves a usable window (need 5 points per axis)");

    // Gap between consecutive scales on the common (smaller) window, matching
    // nodes by their offset from the center.
    for (std::size_t k = 0; k + 1 < out.fields.size(); ++k) {
        const ScalarField& a = out.fields[k];
        const ScalarField& b = out.fields[k + 1];
        const int mmin = std::min(a.grid.m, b.grid.m);
        const int oa = a.grid.origin_index(), ob = b.grid.origin_index(), oc = (mmin - 1) / 2;
        double sup = 0.0;
        std::array<int, kMaxDim> idx{}, ja{}, jb{};
        Grid cw(g.dim, 0.5 * static_cast<double>(mmin - 1) * g.h, mmin);
        for (std::size_t f = 0; f < cw.num_points(); ++f) {
            cw.unflatten(f, idx);
            for (int d = 0; d < g.dim; ++d) {
                const int off = idx[static_cast<std::size_t>(d)] - oc;
                ja[static_cast<std::size_t>(d)] = oa + off;
                jb[static_cast<std::size_t>(d)] = ob + off;
            }
            for (int d = g.dim; d < kMaxDim; ++d) ja[static_cast<std::size_t>(d)] = jb[static_cast<std::size_t>(d)] = 0;
            const double dv = std::fabs(b.at(b.grid.flatten(jb)) - a.at(a.grid.flatten(ja)));
            if (dv > sup) sup = dv;
        }
        out.gaps.push_back(sup);
    }
    return out;
}

TranslatorCheck check_translator(const ConeSpec& cone, const std::array<double, kMaxDim>& a,
                                 const std::array<double, kMaxDim>& b, double c, const Grid& grid,
                                 const RunConfig& cfg, int workers, std::vector<double> marks) {
    cfg.validate();
    const ScalarField u0 = sample_cone(cone, grid);
    const BoundaryClosure closure = BoundaryClosure::frozen(cone);
    const GhostView gv0 = at_time(closure, 0.0);

    TranslatorCheck chk;
    chk.cert.kind = "translator";
    chk.cert.residual_field = translator_residual(u0, a, b, c, gv0);
    chk.static_residual_sup = sup_abs_interior(chk.cert.residual_field, cfg.margin);
    chk.cert.residual_sup_interior = chk.static_residual_sup;
    chk.cert.condition_a_margin = check_condition_a(u0, cfg.delta, gv0, cfg.margin).margin;
    chk.cert.d3_sup = d3_sup(u0, gv0, cfg.margin);
    fill_common_provenance(chk.cert.provenance, grid, cfg, workers);

    if (marks.empty()) marks.push_back(cfg.horizon);
    for (double t : marks)
        for (int d = 0; d < grid.dim; ++d) {
            const double cells = a[static_cast<std::size_t>(d)] * t / grid.h;
            if (std::fabs(cells - std::nearbyint(cells)) > 1e-9 * std::max(1.0, std::fabs(cells)))
                throw usage_error("check_translator: snapshot times must keep a*t on whole lattice cells");
        }

    auto [fin, rep] = run_flow(u0, closure, cfg, FlowKind::physical, workers, marks);
    (void)fin;

    // Compare each snapshot against the exact translating solution
    //   u0(x - a t) + (b.x) t + c t - (1/2)(a.b) t^2
    // over the margin-interior cells whose pullback x - a t is still on-grid.
    double adotb = 0.0;
    for (int d = 0; d < grid.dim; ++d)
        adotb += a[static_cast<std::size_t>(d)] * b[static_cast<std::size_t>(d)];

    for (const Snapshot& snap : rep.snapshots) {
        if (!(snap.time > 0.0)) continue;
        const double t = snap.time;
        std::array<int, kMaxDim> shift{};
        for (int d = 0; d < grid.dim; ++d)
            shift[static_cast<std::size_t>(d)] =
                static_cast<int>(std::llround(a[static_cast<std::size_t>(d)] * t / grid.h));
        double sup = 0.0;
        long cells = 0;
        detail::for_each_margin_cell(grid, cfg.margin, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
            std::array<int, kMaxDim> jdx{};
            for (int d = 0; d < grid.dim; ++d) {
                jdx[static_cast<std::size_t>(d)] = idx[static_cast<std::size_t>(d)] - shift[static_cast<std::size_t>(d)];
                if (jdx[static_cast<std::size_t>(d)] < 0 || jdx[static_cast<std::size_t>(d)] >= grid.m) return;
            }
            std::array<double, kMaxDim> x{};
            grid.coords_of(idx, x);
            double bx = 0.0;
            for (int d = 0; d < grid.dim; ++d) bx += b[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
            const double exact = u0.at(grid.flatten(jdx)) + t * bx + c * t - 0.5 * adotb * t * t;
            const double dv = std::fabs(snap.field.at(f) - exact);
            if (dv > sup) sup = dv;
            ++cells;
        });
        if (cells == 0)
            throw usage_error("check_translator: translation leaves the comparison window empty");
        if (sup > chk.dynamic_defect) chk.dynamic_defect = sup;
    }
    chk.report = std::move(rep);
    chk.cert.provenance["dynamic.defect"] = format_sig17(chk.dynamic_defect);
    chk.cert.provenance["dynamic.t_end"] = format_sig17(marks.back());
    return chk;
}

} // namespace lagflow
