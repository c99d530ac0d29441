#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "lagflow/diagnostics.hpp"
#include "lagflow/io.hpp"
#include "lagflow/kernels.hpp"
#include "lagflow/soliton.hpp"
#include "lagflow/stencils.hpp"

namespace lagflow::experiments {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

void push(ExperimentResult& r, const std::string& label, bool pass, const std::string& detail) {
    r.checks.push_back(CheckLine{label, pass, detail});
}

// Criterion shared across the flow experiments: no report row may show a
// Hessian eigenvalue outside the pinching band (1 - delta), up to 1e-6.
void add_hess_check(ExperimentResult& r, const FlowReport& rep, double delta) {
    double sup = 0.0;
    for (const ReportRow& row : rep.rows)
        sup = std::max(sup, std::max(std::fabs(row.hess_min), std::fabs(row.hess_max)));
    const double bound = (1.0 - delta) + 1e-6;
    r.metrics["hess_sup"] = sup;
    r.metrics["hess_bound"] = 1.0 - delta;
    push(r, "condition_a_rows", sup <= bound,
         "sup rho(D2u) over rows = " + fmt(sup) + ", allowed " + fmt(bound));
}

std::map<std::string, std::string> manifest_base(const std::string& name, const Grid& g,
                                                 const RunConfig& cfg, int workers) {
    std::map<std::string, std::string> m;
    m["experiment"] = name;
    m["grid.dim"] = std::to_string(g.dim);
    m["grid.m"] = std::to_string(g.m);
    m["grid.R"] = format_sig17(g.radius);
    m["config.delta"] = format_sig17(cfg.delta);
    m["config.dt_safety"] = format_sig17(cfg.dt_safety);
    m["config.horizon"] = format_sig17(cfg.horizon);
    m["config.interior_margin_cells"] = std::to_string(cfg.margin);
    m["config.residual_tol"] = format_sig17(cfg.residual_tol);
    m["config.snapshot_stride"] = std::to_string(cfg.snapshot_stride);
    m["config.stationarity_tol"] = format_sig17(cfg.stationarity_tol);
    m["run.workers"] = std::to_string(workers);
    m["run.kernel_backend"] = kernels::backend_name(kernels::active_backend());
    return m;
}

void merge_metrics(std::map<std::string, std::string>& man, const ExperimentResult& r) {
    for (const auto& [k, v] : r.metrics) man["metric." + k] = format_sig17(v);
    for (const CheckLine& c : r.checks) man["check." + c.label] = c.pass ? "pass" : "FAIL";
}

} // namespace

// ---------------------------------------------------------------------------
// quadratic-flow: physical flow from u0 = (1/2) x^T diag(1/2, 3/10) x has the
// exact solution u0 + t * (atan(1/2) + atan(3/10)); the angle constant below
// is that arctan sum to 17 significant digits.
// ---------------------------------------------------------------------------
ExperimentResult quadratic_flow(const std::string& out_dir, int workers) {
    constexpr double kAngleConstant = 0.7551044034786732;

    ExperimentResult r;
    r.name = "quadratic-flow";
    const ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    const Grid g(2, 8.0, 129);
    RunConfig cfg;
    cfg.delta = 0.5;
    cfg.horizon = 1.0;

    const ScalarField u0 = sample_cone(cone, g);
    auto [fin, rep] = run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, workers);

    ScalarField diff(g);
    for (std::size_t f = 0; f < diff.size(); ++f)
        diff.v[f] = fin.field.at(f) - (u0.at(f) + cfg.horizon * kAngleConstant);
    const double err = sup_abs_interior(diff, cfg.margin);
    r.metrics["exact_error"] = err;
    push(r, "exact_error", err <= 1e-8,
         "sup-interior |u(1) - (u0 + atan-sum)| = " + fmt(err) + ", allowed 1e-8");
    add_hess_check(r, rep, cfg.delta);

    write_report_csv(rep, out_path(out_dir, "quadratic_flow_report.csv"));
    write_field(fin.field, out_path(out_dir, "quadratic_flow_final.field"));
    auto man = manifest_base(r.name, g, cfg, workers);
    merge_metrics(man, r);
    write_manifest(man, out_path(out_dir, "quadratic_flow_manifest.txt"));
    return r;
}

// ---------------------------------------------------------------------------
// paper-expander: the sign-flip cone (a1, a2) = (1/2, 3/10) at delta = 1/2.
// Builds the expander, runs the worker-count determinism re-run, and closes
// the loop back to the cone through the blow-down window.
// ---------------------------------------------------------------------------
ExperimentResult paper_expander(const std::string& out_dir, int workers) {
    ExperimentResult r;
    r.name = "paper-expander";
    const ConeSpec cone = ConeSpec::sign_flip({0.5, 0.3});
    const Grid g(2, 8.0, 129);
    RunConfig cfg;
    cfg.delta = 0.5;
    cfg.horizon = 20.0;
    cfg.residual_tol = 1e-4;
    // The pinned ring data carries the sector-wise angle constant, which is
    // discontinuous where the cone interface meets the boundary; that corner
    // artifact contaminates Hessian and d3 sups within ~2 units of the ring,
    // so all reported norms use the |y| <= 6 window.
    cfg.margin = 16;

    const ScalarField u0 = sample_cone(cone, g);
    const BoundaryClosure closure = BoundaryClosure::expander_relaxed(cone);
    const std::vector<double> marks = {5.0, 10.0, 15.0, 20.0};

    // Determinism re-run (criterion: bitwise-identical reports and states
    // across worker counts).
    auto [st1, rep1] = run_flow(u0, closure, cfg, FlowKind::rescaled_expander, 1, marks);
    auto [st4, rep4] = run_flow(u0, closure, cfg, FlowKind::rescaled_expander, 4, marks);
    const std::string csv1 = report_csv(rep1);
    const std::string csv4 = report_csv(rep4);
    const std::string p1 = out_path(out_dir, "paper_expander_report_w1.csv");
    const std::string p4 = out_path(out_dir, "paper_expander_report_w4.csv");
    write_text_file(p1, csv1);
    write_text_file(p4, csv4);
    const bool det = csv1 == csv4 && st1.field.v == st4.field.v &&
                     read_text_file(p1) == read_text_file(p4);
    push(r, "determinism", det,
         det ? "worker counts 1 and 4: reports and final states bitwise identical"
             : "worker counts 1 and 4 disagree");

    // The constructor op itself (stops at stationarity if that comes first).
    bool built = false;
    double final_s = 0.0;
    try {
        auto [field, cert] = make_expander(cone, g, cfg, workers);
        built = true;
        final_s = parse_double(cert.provenance.at("run.final_s"));
        r.metrics["residual"] = cert.residual_sup_interior;
        r.metrics["d3"] = cert.d3_sup;
        r.metrics["final_s"] = final_s;
        push(r, "residual", cert.residual_sup_interior <= cfg.residual_tol,
             "expander residual " + fmt(cert.residual_sup_interior) + " at s = " + fmt(final_s) +
                 ", allowed " + fmt(cfg.residual_tol));
        push(r, "d3_nontrivial", cert.d3_sup > 0.01,
             "d3_sup = " + fmt(cert.d3_sup) + ", quadratic would be ~0 (threshold 0.01)");

        // Round trip: blow the expander back down to the unit window and
        // compare against the cone that produced it. The defect budget is the
        // cone's own angle constant over r^2 (the genuine soliton-vs-cone
        // gap) plus 5 h^2 of stencil/interpolation error.
        const ScalarField window = cone_of_expander(field, cfg.margin);
        const ScalarField expected = sample_cone(cone, window.grid);
        double defect = 0.0;
        for (std::size_t f = 0; f < window.size(); ++f)
            defect = std::max(defect, std::fabs(window.at(f) - expected.at(f)));
        const double rr = g.radius - cfg.margin * g.h;
        const double tol = cone.max_abs_angle() / (rr * rr) + 5.0 * g.h * g.h;
        r.metrics["roundtrip_defect"] = defect;
        r.metrics["roundtrip_tol"] = tol;
        push(r, "roundtrip", defect <= tol,
             "unit-window defect " + fmt(defect) + ", allowed " + fmt(tol));

        write_field(field, out_path(out_dir, "paper_expander.field"));
        write_field(window, out_path(out_dir, "paper_expander_window.field"));
        write_certificate(cert, out_path(out_dir, "paper_expander_cert.json"),
                          out_path(out_dir, "paper_expander_residual.field"));
    } catch (const tolerance_error& e) {
        push(r, "residual", false, e.what());
    }
    if (!built) {
        push(r, "d3_nontrivial", false, "not evaluated: construction failed");
        push(r, "roundtrip", false, "not evaluated: construction failed");
    }
    add_hess_check(r, rep1, cfg.delta);

    auto man = manifest_base(r.name, g, cfg, workers);
    merge_metrics(man, r);
    write_manifest(man, out_path(out_dir, "paper_expander_manifest.txt"));
    return r;
}

// ---------------------------------------------------------------------------
// cone-bump-flow: smooth quadratic cone plus a compact bump under the
// physical flow; watches the self-similarity defect between dyadic times and
// the d3 * sqrt(t) decay monitor.
// ---------------------------------------------------------------------------
ExperimentResult cone_bump_flow(const std::string& out_dir, int workers) {
    ExperimentResult r;
    r.name = "cone-bump-flow";
    const ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    const Grid g(2, 8.0, 129);
    RunConfig cfg;
    cfg.delta = 0.35; // bump Hessian (<= 0.1) must fit inside the band
    cfg.horizon = 16.0;

    ScalarField u0 = sample_cone(cone, g);
    add_compact_bump(u0, {0.0, 0.0, 0.0}, 0.05, 1.0);

    auto [fin, rep] =
        run_flow(u0, BoundaryClosure::frozen(cone), cfg, FlowKind::physical, workers,
                 {1.0, 2.0, 4.0, 8.0, 16.0});

    const double pairs[4] = {1.0, 2.0, 4.0, 8.0};
    double defect[4];
    for (int k = 0; k < 4; ++k) {
        defect[k] = self_similarity_defect(rep, pairs[k], 2.0 * pairs[k], cfg.margin);
        r.metrics["defect_" + std::to_string(static_cast<int>(pairs[k]))] = defect[k];
    }
    bool decreasing = true;
    for (int k = 1; k < 4; ++k)
        if (!(defect[k] < defect[k - 1])) decreasing = false;
    push(r, "defect_decreasing", decreasing,
         "defect(t,2t) at t=1,2,4,8: " + fmt(defect[0]) + " " + fmt(defect[1]) + " " +
             fmt(defect[2]) + " " + fmt(defect[3]));
    push(r, "defect_final", defect[3] <= 1e-3,
         "final defect " + fmt(defect[3]) + ", allowed 1e-3");

    const DecayMonitor dm = decay_monitor(rep, 3);
    r.metrics["decay_constant"] = dm.empirical_constant;
    push(r, "decay_trend", dm.non_increasing,
         std::string("d3*sqrt(t) non-increasing after transient: ") +
             (dm.non_increasing ? "yes" : "no") + ", C = " + fmt(dm.empirical_constant));
    add_hess_check(r, rep, cfg.delta);

    write_report_csv(rep, out_path(out_dir, "cone_bump_flow_report.csv"));
    write_field(fin.field, out_path(out_dir, "cone_bump_flow_final.field"));
    auto man = manifest_base(r.name, g, cfg, workers);
    merge_metrics(man, r);
    write_manifest(man, out_path(out_dir, "cone_bump_flow_manifest.txt"));
    return r;
}

// ---------------------------------------------------------------------------
// shrinker-probe: perturbed quadratic shrinker under the normalized flow;
// the perturbation must die (d3 down 10x by s = 5, quadratic-fit distance
// monotone down), echoing the triviality of entire shrinkers in the band.
// ---------------------------------------------------------------------------
ExperimentResult shrinker_probe(const std::string& out_dir, int workers) {
    ExperimentResult r;
    r.name = "shrinker-probe";
    const QuadraticSoliton ref = quadratic_soliton(SymMatrix::diag({0.3, 0.2}), SolitonKind::shrinker);
    const Grid g(2, 8.0, 129);
    RunConfig cfg;
    cfg.delta = 0.5;
    cfg.horizon = 5.0;
    // The bump's quadratic component is a neutral mode of the gauged flow and
    // piles up as a boundary layer (about one unit wide) against the ring
    // clamp; keep the measurement window at |y| <= 6, clear of that layer.
    cfg.margin = 16;

    ScalarField w0 = sample_soliton(ref, g);
    add_compact_bump(w0, {0.0, 0.0, 0.0}, 0.01, 1.0);

    const ShrinkerProbe probe = probe_shrinker(w0, ref, cfg, workers);
    r.metrics["d3_initial"] = probe.d3_initial;
    r.metrics["d3_final"] = probe.d3_final;
    push(r, "d3_decay", probe.d3_final <= 0.1 * probe.d3_initial,
         "d3: " + fmt(probe.d3_initial) + " -> " + fmt(probe.d3_final) + " at s = " +
             fmt(cfg.horizon) + ", allowed 0.1x of initial");
    bool mono = probe.fit_distances.size() >= 2;
    for (std::size_t i = 1; i < probe.fit_distances.size(); ++i)
        if (probe.fit_distances[i] > probe.fit_distances[i - 1] * (1.0 + 1e-10)) mono = false;
    if (mono) mono = probe.fit_distances.back() < probe.fit_distances.front();
    r.metrics["fit_first"] = probe.fit_distances.empty() ? 0.0 : probe.fit_distances.front();
    r.metrics["fit_final"] = probe.fit_distances.empty() ? 0.0 : probe.fit_distances.back();
    push(r, "fit_monotone", mono,
         "best-fit-quadratic distance " + fmt(r.metric("fit_first")) + " -> " +
             fmt(r.metric("fit_final")) + ", monotone: " + (mono ? "yes" : "no"));
    add_hess_check(r, probe.report, cfg.delta);

    std::ostringstream fit;
    fit << "time,fit_distance\n";
    for (std::size_t i = 0; i < probe.report.snapshots.size(); ++i)
        fit << format_sig17(probe.report.snapshots[i].time) << ","
            << format_sig17(probe.fit_distances[i]) << "\n";
    write_text_file(out_path(out_dir, "shrinker_probe_fit.csv"), fit.str());
    write_report_csv(probe.report, out_path(out_dir, "shrinker_probe_report.csv"));
    write_certificate(probe.cert, out_path(out_dir, "shrinker_probe_cert.json"),
                      out_path(out_dir, "shrinker_probe_residual.field"));
    auto man = manifest_base(r.name, g, cfg, workers);
    merge_metrics(man, r);
    write_manifest(man, out_path(out_dir, "shrinker_probe_manifest.txt"));
    return r;
}

// ---------------------------------------------------------------------------
// translator: quadratic potential translating with a = (1, 0); b = A a and
// c = angle(A) make the static identity exact, and the physical flow must
// track the rigidly translating solution.
// ---------------------------------------------------------------------------
ExperimentResult translator_check(const std::string& out_dir, int workers) {
    ExperimentResult r;
    r.name = "translator";
    const SymMatrix A = SymMatrix::diag({0.5, 0.3});
    const ConeSpec cone = ConeSpec::single(A);
    const Grid g(2, 8.0, 129);
    RunConfig cfg;
    cfg.delta = 0.5;
    cfg.horizon = 1.0; // a * t crosses exactly 8 cells of h = 1/8

    const std::array<double, kMaxDim> a = {1.0, 0.0, 0.0};
    const std::array<double, kMaxDim> b = {A.at(0, 0) * a[0], A.at(0, 1) * a[0], 0.0};
    const double c = lagrangian_angle(A);

    const TranslatorCheck chk = check_translator(cone, a, b, c, g, cfg, workers);
    r.metrics["static_residual"] = chk.static_residual_sup;
    r.metrics["dynamic_defect"] = chk.dynamic_defect;
    push(r, "static_residual", chk.static_residual_sup <= 1e-12,
         "static residual " + fmt(chk.static_residual_sup) + ", allowed 1e-12");
    push(r, "dynamic_defect", chk.dynamic_defect <= 1e-8,
         "dynamic defect " + fmt(chk.dynamic_defect) + " at t = 1, allowed 1e-8");
    add_hess_check(r, chk.report, cfg.delta);

    write_certificate(chk.cert, out_path(out_dir, "translator_cert.json"),
                      out_path(out_dir, "translator_residual.field"));
    write_report_csv(chk.report, out_path(out_dir, "translator_report.csv"));
    auto man = manifest_base(r.name, g, cfg, workers);
    merge_metrics(man, r);
    write_manifest(man, out_path(out_dir, "translator_manifest.txt"));
    return r;
}

// ---------------------------------------------------------------------------
// convergence: (a) observed spatial order from h-halving at fixed R, measured
// on a transient state (the stationary limit of the smooth preset is an exact
// quadratic that every grid reproduces exactly, so only the transient carries
// a measurable discretization error); (b) residual stability under domain
// doubling at fixed h, which is the truncation-radius control.
// ---------------------------------------------------------------------------
ExperimentResult convergence_study(const std::string& out_dir, int workers) {
    ExperimentResult r;
    r.name = "convergence";

    // (a) m in {65, 129, 257} at R = 8, rescaled expander flow to s = 2.
    const ConeSpec cone = ConeSpec::single(SymMatrix::diag({0.5, 0.3}));
    const int ms[3] = {65, 129, 257};
    ScalarField fields[3];
    RunConfig cfga;
    cfga.delta = 0.35;
    cfga.horizon = 2.0;
    cfga.stationarity_tol = 0.0; // fixed-time comparison, no early stop
    cfga.snapshot_stride = 1000000;
    for (int k = 0; k < 3; ++k) {
        const Grid g(2, 8.0, ms[k]);
        ScalarField u0 = sample_cone(cone, g);
        add_compact_bump(u0, {0.0, 0.0, 0.0}, 0.05, 1.0);
        auto [fin, rep] =
            run_flow(u0, BoundaryClosure::expander_relaxed(cone), cfga, FlowKind::rescaled_expander, workers);
        (void)rep;
        fields[k] = std::move(fin.field);
    }
    // Compare on the coarse margin-interior lattice, which all three grids
    // share (index maps i -> 2i -> 4i).
    double d_coarse = 0.0, d_fine = 0.0;
    const Grid& gc = fields[0].grid;
    for (int i = cfga.margin; i <= gc.m - 1 - cfga.margin; ++i)
        for (int j = cfga.margin; j <= gc.m - 1 - cfga.margin; ++j) {
            const double v65 = fields[0].at(static_cast<std::size_t>(i) * gc.m + j);
            const double v129 = fields[1].at((static_cast<std::size_t>(2 * i) * 129) + 2 * j);
            const double v257 = fields[2].at((static_cast<std::size_t>(4 * i) * 257) + 4 * j);
            d_coarse = std::max(d_coarse, std::fabs(v65 - v129));
            d_fine = std::max(d_fine, std::fabs(v129 - v257));
        }
    const double order = std::log2(d_coarse / d_fine);
    r.metrics["h_diff_coarse"] = d_coarse;
    r.metrics["h_diff_fine"] = d_fine;
    r.metrics["order"] = order;
    push(r, "order", order >= 1.8,
         "observed spatial order " + fmt(order) + " (diffs " + fmt(d_coarse) + " / " + fmt(d_fine) +
             "), required >= 1.8");

    // (b) sign-flip cone at fixed h = 1/8, s = 15: residual must not move by
    // 2x when the domain radius doubles.
    const ConeSpec cone4 = ConeSpec::sign_flip({0.5, 0.3});
    RunConfig cfgb;
    cfgb.delta = 0.5;
    cfgb.horizon = 15.0;
    cfgb.stationarity_tol = 0.0;
    cfgb.snapshot_stride = 1000000;
    double res[2];
    const Grid domains[2] = {Grid(2, 8.0, 129), Grid(2, 16.0, 257)};
    for (int k = 0; k < 2; ++k) {
        const BoundaryClosure closure = BoundaryClosure::expander_relaxed(cone4);
        auto [fin, rep] = run_flow(sample_cone(cone4, domains[k]), closure, cfgb,
                                   FlowKind::rescaled_expander, workers);
        (void)rep;
        res[k] = sup_abs_interior(expander_residual(fin.field, at_time(closure, fin.time)),
                                  cfgb.margin);
    }
    const double ratio = res[1] / res[0];
    const double worst = std::max(ratio, 1.0 / ratio);
    r.metrics["res_R8"] = res[0];
    r.metrics["res_R16"] = res[1];
    r.metrics["domain_ratio"] = worst;
    push(r, "domain_ratio", worst < 2.0,
         "residual R=8: " + fmt(res[0]) + ", R=16: " + fmt(res[1]) + ", ratio " + fmt(worst) +
             ", required < 2");

    std::ostringstream csv;
    csv << "study,R,m,h,value\n";
    csv << "h_halving_diff,8,65," << format_sig17(fields[0].grid.h) << "," << format_sig17(d_coarse)
        << "\n";
    csv << "h_halving_diff,8,129," << format_sig17(fields[1].grid.h) << "," << format_sig17(d_fine)
        << "\n";
    csv << "observed_order,8,257," << format_sig17(fields[2].grid.h) << "," << format_sig17(order)
        << "\n";
    csv << "residual_s15,8,129," << format_sig17(domains[0].h) << "," << format_sig17(res[0]) << "\n";
    csv << "residual_s15,16,257," << format_sig17(domains[1].h) << "," << format_sig17(res[1])
        << "\n";
    csv << "residual_ratio,16,257," << format_sig17(domains[1].h) << "," << format_sig17(worst)
        << "\n";
    write_text_file(out_path(out_dir, "convergence_study.csv"), csv.str());

    auto man = manifest_base(r.name, domains[0], cfgb, workers);
    merge_metrics(man, r);
    write_manifest(man, out_path(out_dir, "convergence_manifest.txt"));
    return r;
}

std::vector<std::string> preset_names() {
    return {"quadratic-flow", "paper-expander", "cone-bump-flow",
            "shrinker-probe", "translator",     "convergence"};
}

ExperimentResult run_preset(const std::string& name, const std::string& out_dir, int workers) {
    if (name == "quadratic-flow") return quadratic_flow(out_dir, workers);
    if (name == "paper-expander") return paper_expander(out_dir, workers);
    if (name == "cone-bump-flow") return cone_bump_flow(out_dir, workers);
    if (name == "shrinker-probe") return shrinker_probe(out_dir, workers);
    if (name == "translator") return translator_check(out_dir, workers);
    if (name == "convergence") return convergence_study(out_dir, workers);
    throw usage_error("unknown preset '" + name + "' (see `lagflow preset --list`)");
}

} // namespace lagflow::experiments
