// lagflow: command-line front end for the Lagrangian potential-flow laboratory.
// Exit codes: 0 success, 1 usage, 2 numerical failure, 3 tolerance unmet.

#include <array>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "experiments.hpp"
#include "lagflow/diagnostics.hpp"
#include "lagflow/io.hpp"
#include "lagflow/kernels.hpp"
#include "lagflow/soliton.hpp"
#include "lagflow/stencils.hpp"

namespace lf = lagflow;

namespace {

// ---- option plumbing -------------------------------------------------------

struct CommonOpts {
    std::string out_dir = ".";
    std::string run_id;
    int workers = 0;             // 0 = take LAGFLOW_WORKERS, else 1
    std::string kernel = "auto"; // overridden by LAGFLOW_KERNEL when present
};

struct ConfigOpts {
    std::string file;
    std::optional<double> delta, dt_safety, horizon, stationarity_tol, residual_tol;
    std::optional<int> snapshot_stride, margin;
};

struct GridOpts {
    int m = 129;
    double R = 8.0;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--out", o.out_dir, "output directory (created if missing)");
    sub->add_option("--run-id", o.run_id, "output file prefix (default: subcommand name)");
    sub->add_option("--workers", o.workers, "worker threads (default: $LAGFLOW_WORKERS or 1)");
    sub->add_option("--kernel", o.kernel, "compute backend: auto | scalar | avx2");
}

void add_config(CLI::App* sub, ConfigOpts& o) {
    sub->add_option("--config", o.file, "flat 'key = value' config file");
    sub->add_option("--delta", o.delta, "pinching parameter in (0,1)");
    sub->add_option("--dt-safety", o.dt_safety, "fraction of the stable step");
    sub->add_option("--t-end,--s-end,--horizon", o.horizon, "end time");
    sub->add_option("--snapshot-stride", o.snapshot_stride, "report every N steps");
    sub->add_option("--margin", o.margin, "interior margin in cells for reported norms");
    sub->add_option("--stationarity-tol", o.stationarity_tol,
                    "early-stop rate threshold (rescaled flows; <= 0 disables)");
    sub->add_option("--residual-tol", o.residual_tol, "certificate acceptance threshold");
}

void add_grid(CLI::App* sub, GridOpts& o) {
    sub->add_option("--grid-m", o.m, "lattice points per axis (odd, >= 5)");
    sub->add_option("--grid-R", o.R, "domain half-width");
}

lf::RunConfig resolve_config(const ConfigOpts& o) {
    lf::RunConfig cfg;
    if (!o.file.empty()) {
        auto kv = lf::parse_config_text(lf::read_text_file(o.file));
        lf::apply_config(cfg, kv);
        if (!kv.empty()) throw lf::usage_error("config: unknown key '" + kv.begin()->first + "'");
    }
    if (o.delta) cfg.delta = *o.delta;
    if (o.dt_safety) cfg.dt_safety = *o.dt_safety;
    if (o.horizon) cfg.horizon = *o.horizon;
    if (o.snapshot_stride) cfg.snapshot_stride = *o.snapshot_stride;
    if (o.margin) cfg.margin = *o.margin;
    if (o.stationarity_tol) cfg.stationarity_tol = *o.stationarity_tol;
    if (o.residual_tol) cfg.residual_tol = *o.residual_tol;
    cfg.validate();
    return cfg;
}

int env_workers() {
    const char* s = std::getenv("LAGFLOW_WORKERS");
    if (!s || !*s) return 1;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1) throw lf::usage_error("LAGFLOW_WORKERS must be a positive integer");
    return static_cast<int>(v);
}

int resolve_workers(const CommonOpts& o) { return o.workers > 0 ? o.workers : env_workers(); }

void apply_kernel(const CommonOpts& o) {
    std::string name = o.kernel;
    if (name == "auto") {
        const char* s = std::getenv("LAGFLOW_KERNEL");
        if (s && *s) name = s;
    }
    lf::kernels::set_backend(lf::kernels::parse_backend(name));
}

std::string out_path(const CommonOpts& o, const std::string& suffix) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / (o.run_id + suffix)).string();
}

std::map<std::string, std::string> manifest_common(const lf::RunConfig& cfg, int workers) {
    std::map<std::string, std::string> m;
    m["config.delta"] = lf::format_sig17(cfg.delta);
    m["config.dt_safety"] = lf::format_sig17(cfg.dt_safety);
    m["config.horizon"] = lf::format_sig17(cfg.horizon);
    m["config.interior_margin_cells"] = std::to_string(cfg.margin);
    m["config.residual_tol"] = lf::format_sig17(cfg.residual_tol);
    m["config.snapshot_stride"] = std::to_string(cfg.snapshot_stride);
    m["config.stationarity_tol"] = lf::format_sig17(cfg.stationarity_tol);
    m["run.workers"] = std::to_string(workers);
    m["run.kernel_backend"] = lf::kernels::backend_name(lf::kernels::active_backend());
    return m;
}

void manifest_grid(std::map<std::string, std::string>& m, const lf::Grid& g) {
    m["grid.dim"] = std::to_string(g.dim);
    m["grid.m"] = std::to_string(g.m);
    m["grid.R"] = lf::format_sig17(g.radius);
}

// ---- subcommand bodies ------------------------------------------------------

struct FlowArgs {
    CommonOpts common;
    ConfigOpts config;
    GridOpts grid;
    std::string cone_file;
    double bump_amp = 0.0, bump_width = 1.0;
    std::vector<double> marks;
    std::string flavor = "expander"; // rescaled-flow only
};

int run_flow_cmd(const FlowArgs& a, bool rescaled) {
    apply_kernel(a.common);
    const int workers = resolve_workers(a.common);
    const lf::RunConfig cfg = resolve_config(a.config);
    const lf::ConeSpec cone = lf::read_cone(a.cone_file);
    const lf::Grid grid(cone.dim, a.grid.R, a.grid.m);

    lf::ScalarField u0 = lf::sample_cone(cone, grid);
    if (a.bump_amp != 0.0) lf::add_compact_bump(u0, {}, a.bump_amp, a.bump_width);

    lf::FlowKind kind = lf::FlowKind::physical;
    lf::BoundaryClosure closure = lf::BoundaryClosure::frozen(cone);
    if (rescaled) {
        kind = lf::parse_flow_kind(a.flavor);
        if (kind == lf::FlowKind::physical)
            throw lf::usage_error("rescaled-flow: flavor must be expander or shrinker");
        // A rescaled CLI run always starts from raw cone samples, so the
        // expander flavor takes the relaxing pin (compatible at s = 0); the
        // shrinker flavor keeps the stationary pin, matching probe-shrinker.
        closure = kind == lf::FlowKind::rescaled_expander ? lf::BoundaryClosure::expander_relaxed(cone)
                                                          : lf::BoundaryClosure::shrinker(cone);
    }

    auto [fin, rep] = lf::run_flow(u0, closure, cfg, kind, workers, a.marks);

    lf::write_report_csv(rep, out_path(a.common, "_report.csv"));
    lf::write_field(fin.field, out_path(a.common, "_final.field"));
    auto man = manifest_common(cfg, workers);
    manifest_grid(man, grid);
    man["input.cone"] = a.cone_file;
    man["run.kind"] = lf::flow_kind_name(kind);
    man["run.steps"] = std::to_string(fin.step_count);
    man["run.final_time"] = lf::format_sig17(fin.time);
    man["run.stop_reason"] = rep.stopped_early ? rep.stop_reason : "horizon";
    for (std::size_t k = 0; k < rep.snapshots.size(); ++k) {
        std::string name = "_snap" + std::to_string(k) + ".field";
        lf::write_field(rep.snapshots[k].field, out_path(a.common, name));
        man["snapshot." + std::to_string(k) + ".time"] = lf::format_sig17(rep.snapshots[k].time);
    }
    lf::write_manifest(man, out_path(a.common, "_manifest.txt"));

    std::cout << lf::flow_kind_name(kind) << ": " << fin.step_count << " steps to "
              << (rescaled ? "s" : "t") << " = " << fin.time << " ("
              << (rep.stopped_early ? rep.stop_reason : "horizon")
              << "), residual_sup = " << rep.rows.back().residual_sup << "\n";

    // A single-sector cone under the physical flow has the exact solution
    // u0 + t * angle(A); report the live error against it.
    if (!rescaled && cone.sectors.size() == 1 && a.bump_amp == 0.0) {
        lf::ScalarField diff(grid);
        const double ang = cone.sectors[0].angle_value;
        for (std::size_t f = 0; f < diff.size(); ++f)
            diff.v[f] = fin.field.at(f) - (u0.at(f) + fin.time * ang);
        std::cout << "exact-solution check (single quadratic sector): sup-interior error = "
                  << lf::sup_abs_interior(diff, cfg.margin) << "\n";
    }
    return 0;
}

int run_make_expander(const FlowArgs& a) {
    apply_kernel(a.common);
    const int workers = resolve_workers(a.common);
    const lf::RunConfig cfg = resolve_config(a.config);
    const lf::ConeSpec cone = lf::read_cone(a.cone_file);
    const lf::Grid grid(cone.dim, a.grid.R, a.grid.m);

    auto [field, cert] = lf::make_expander(cone, grid, cfg, workers);
    lf::write_field(field, out_path(a.common, ".field"));
    lf::write_certificate(cert, out_path(a.common, "_cert.json"),
                          out_path(a.common, "_residual.field"));
    auto man = manifest_common(cfg, workers);
    manifest_grid(man, grid);
    man["input.cone"] = a.cone_file;
    for (const auto& [k, v] : cert.provenance) man["cert." + k] = v;
    lf::write_manifest(man, out_path(a.common, "_manifest.txt"));

    std::cout << "expander: residual_sup_interior = " << cert.residual_sup_interior
              << ", d3_sup = " << cert.d3_sup << ", condition_a_margin = "
              << cert.condition_a_margin << "\n";
    return 0;
}

struct ProbeArgs {
    CommonOpts common;
    ConfigOpts config;
    GridOpts grid;
    std::string reference_file;
    std::string field_file;
    double bump_amp = 0.01, bump_width = 1.0;
};

int run_probe_shrinker(const ProbeArgs& a) {
    apply_kernel(a.common);
    const int workers = resolve_workers(a.common);
    const lf::RunConfig cfg = resolve_config(a.config);
    const lf::ConeSpec spec = lf::read_cone(a.reference_file);
    if (spec.sectors.size() != 1)
        throw lf::usage_error("probe-shrinker: the reference must be a single-sector (quadratic) cone");
    const lf::QuadraticSoliton ref = lf::quadratic_soliton(spec.sectors[0].A, lf::SolitonKind::shrinker);

    lf::ScalarField w0;
    if (!a.field_file.empty()) {
        w0 = lf::read_field(a.field_file);
    } else {
        w0 = lf::sample_soliton(ref, lf::Grid(spec.dim, a.grid.R, a.grid.m));
        if (a.bump_amp != 0.0) lf::add_compact_bump(w0, {}, a.bump_amp, a.bump_width);
    }

    const lf::ShrinkerProbe probe = lf::probe_shrinker(w0, ref, cfg, workers);
    lf::write_report_csv(probe.report, out_path(a.common, "_report.csv"));
    lf::write_certificate(probe.cert, out_path(a.common, "_cert.json"),
                          out_path(a.common, "_residual.field"));
    std::ostringstream fit;
    fit << "time,fit_distance\n";
    for (std::size_t i = 0; i < probe.report.snapshots.size(); ++i)
        fit << lf::format_sig17(probe.report.snapshots[i].time) << ","
            << lf::format_sig17(probe.fit_distances[i]) << "\n";
    lf::write_text_file(out_path(a.common, "_fit.csv"), fit.str());
    auto man = manifest_common(cfg, workers);
    manifest_grid(man, w0.grid);
    man["input.reference"] = a.reference_file;
    if (!a.field_file.empty()) man["input.field"] = a.field_file;
    for (const auto& [k, v] : probe.cert.provenance) man["cert." + k] = v;
    lf::write_manifest(man, out_path(a.common, "_manifest.txt"));

    std::cout << "shrinker probe: d3 " << probe.d3_initial << " -> " << probe.d3_final
              << ", fit distance " << (probe.fit_distances.empty() ? 0.0 : probe.fit_distances.front())
              << " -> " << (probe.fit_distances.empty() ? 0.0 : probe.fit_distances.back()) << "\n";
    if (!(probe.d3_final <= probe.d3_initial))
        throw lf::tolerance_error("probe-shrinker: d3 did not decay (" +
                                  std::to_string(probe.d3_initial) + " -> " +
                                  std::to_string(probe.d3_final) + ")");
    return 0;
}

struct TranslatorArgs {
    CommonOpts common;
    ConfigOpts config;
    GridOpts grid;
    std::string cone_file;
    std::vector<double> a, b;
    std::optional<double> c;
    double static_tol = 1e-12, dynamic_tol = 1e-8;
};

int run_check_translator(const TranslatorArgs& t) {
    apply_kernel(t.common);
    const int workers = resolve_workers(t.common);
    const lf::RunConfig cfg = resolve_config(t.config);
    const lf::ConeSpec cone = lf::read_cone(t.cone_file);
    const lf::Grid grid(cone.dim, t.grid.R, t.grid.m);
    if (static_cast<int>(t.a.size()) != cone.dim)
        throw lf::usage_error("check-translator: --a needs one component per dimension");
    if (!t.b.empty() && static_cast<int>(t.b.size()) != cone.dim)
        throw lf::usage_error("check-translator: --b needs one component per dimension");

    std::array<double, lf::kMaxDim> a{}, b{};
    for (int d = 0; d < cone.dim; ++d) a[static_cast<std::size_t>(d)] = t.a[static_cast<std::size_t>(d)];
    const lf::SymMatrix& A0 = cone.sectors[0].A;
    for (int d = 0; d < cone.dim; ++d) {
        if (!t.b.empty()) {
            b[static_cast<std::size_t>(d)] = t.b[static_cast<std::size_t>(d)];
        } else { // default: b = A a with the first sector's Hessian
            double s = 0.0;
            for (int e = 0; e < cone.dim; ++e) s += A0.at(d, e) * a[static_cast<std::size_t>(e)];
            b[static_cast<std::size_t>(d)] = s;
        }
    }
    const double c = t.c ? *t.c : cone.sectors[0].angle_value;

    const lf::TranslatorCheck chk = lf::check_translator(cone, a, b, c, grid, cfg, workers);
    lf::write_certificate(chk.cert, out_path(t.common, "_cert.json"),
                          out_path(t.common, "_residual.field"));
    lf::write_report_csv(chk.report, out_path(t.common, "_report.csv"));
    auto man = manifest_common(cfg, workers);
    manifest_grid(man, grid);
    man["input.cone"] = t.cone_file;
    man["translator.c"] = lf::format_sig17(c);
    for (int d = 0; d < cone.dim; ++d) {
        man["translator.a" + std::to_string(d)] = lf::format_sig17(a[static_cast<std::size_t>(d)]);
        man["translator.b" + std::to_string(d)] = lf::format_sig17(b[static_cast<std::size_t>(d)]);
    }
    man["result.static_residual"] = lf::format_sig17(chk.static_residual_sup);
    man["result.dynamic_defect"] = lf::format_sig17(chk.dynamic_defect);
    lf::write_manifest(man, out_path(t.common, "_manifest.txt"));

    std::cout << "translator: static residual = " << chk.static_residual_sup
              << ", dynamic defect = " << chk.dynamic_defect << "\n";
    if (chk.static_residual_sup > t.static_tol)
        throw lf::tolerance_error("check-translator: static residual above tolerance");
    if (chk.dynamic_defect > t.dynamic_tol)
        throw lf::tolerance_error("check-translator: dynamic defect above tolerance");
    return 0;
}

struct BlowdownArgs {
    CommonOpts common;
    std::string field_file;
    std::vector<double> lambdas = {2.0, 3.0, 4.0};
};

int run_blowdown(const BlowdownArgs& a) {
    apply_kernel(a.common);
    const lf::ScalarField u = lf::read_field(a.field_file);
    const lf::BlowdownResult bd = lf::blowdown(u, a.lambdas);

    std::map<std::string, std::string> man;
    man["input.field"] = a.field_file;
    man["run.kernel_backend"] = lf::kernels::backend_name(lf::kernels::active_backend());
    std::ostringstream csv;
    csv << "lambda_from,lambda_to,gap\n";
    for (std::size_t k = 0; k < bd.fields.size(); ++k) {
        std::string name = "_lam" + std::to_string(k) + ".field";
        lf::write_field(bd.fields[k], out_path(a.common, name));
        man["lambda." + std::to_string(k)] = lf::format_sig17(bd.lambdas[k]);
    }
    for (std::size_t k = 0; k + 1 < bd.fields.size(); ++k) {
        csv << lf::format_sig17(bd.lambdas[k]) << "," << lf::format_sig17(bd.lambdas[k + 1]) << ","
            << lf::format_sig17(bd.gaps[k]) << "\n";
        man["gap." + std::to_string(k)] = lf::format_sig17(bd.gaps[k]);
    }
    lf::write_text_file(out_path(a.common, "_gaps.csv"), csv.str());
    lf::write_manifest(man, out_path(a.common, "_manifest.txt"));

    std::cout << "blowdown: " << bd.fields.size() << " scales";
    for (std::size_t k = 0; k < bd.gaps.size(); ++k) std::cout << (k ? ", " : "; gaps: ") << bd.gaps[k];
    std::cout << "\n";
    return 0;
}

int print_checks(const lf::experiments::ExperimentResult& r) {
    for (const auto& c : r.checks)
        std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.label << ": " << c.detail
                  << "\n";
    if (!r.all_pass()) throw lf::tolerance_error("preset '" + r.name + "' has failing checks");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lagflow: a laboratory for graphical Lagrangian mean curvature flow at the "
                 "potential level"};
    app.require_subcommand(1);

    FlowArgs flow_a, resc_a, mkexp_a;
    ProbeArgs probe_a;
    TranslatorArgs trans_a;
    BlowdownArgs blow_a;
    CommonOpts conv_common, preset_common;
    std::string preset_name;
    bool preset_list = false;

    CLI::App* flow = app.add_subcommand("flow", "physical flow du/dt = G(D2u) from cone data");
    flow->add_option("--cone", flow_a.cone_file, "cone spec file")->required();
    flow->add_option("--bump-amp", flow_a.bump_amp, "compact bump amplitude at the origin");
    flow->add_option("--bump-width", flow_a.bump_width, "compact bump width");
    flow->add_option("--mark", flow_a.marks, "snapshot times (repeatable)")->delimiter(',');
    add_grid(flow, flow_a.grid);
    add_config(flow, flow_a.config);
    add_common(flow, flow_a.common);

    CLI::App* resc = app.add_subcommand("rescaled-flow", "similarity-variable flow (expander or shrinker normalization)");
    resc->add_option("--cone", resc_a.cone_file, "cone spec file")->required();
    resc->add_option("--flavor", resc_a.flavor, "expander | shrinker");
    resc->add_option("--bump-amp", resc_a.bump_amp, "compact bump amplitude at the origin");
    resc->add_option("--bump-width", resc_a.bump_width, "compact bump width");
    resc->add_option("--mark", resc_a.marks, "snapshot times (repeatable)")->delimiter(',');
    add_grid(resc, resc_a.grid);
    add_config(resc, resc_a.config);
    add_common(resc, resc_a.common);

    CLI::App* mkexp = app.add_subcommand("make-expander", "construct a self-expander from cone data, with certificate");
    mkexp->add_option("--cone", mkexp_a.cone_file, "cone spec file")->required();
    add_grid(mkexp, mkexp_a.grid);
    add_config(mkexp, mkexp_a.config);
    add_common(mkexp, mkexp_a.common);

    CLI::App* probe = app.add_subcommand("probe-shrinker", "normalized shrinker flow against a quadratic reference");
    probe->add_option("--reference", probe_a.reference_file, "single-sector cone file (the reference quadratic)")
        ->required();
    probe->add_option("--field", probe_a.field_file, "initial potential field file (default: perturbed reference)");
    probe->add_option("--bump-amp", probe_a.bump_amp, "perturbation amplitude (when no --field)");
    probe->add_option("--bump-width", probe_a.bump_width, "perturbation width");
    add_grid(probe, probe_a.grid);
    add_config(probe, probe_a.config);
    add_common(probe, probe_a.common);

    CLI::App* trans = app.add_subcommand("check-translator", "static and dynamic translator identity check");
    trans->add_option("--cone", trans_a.cone_file, "cone spec file (first sector rules the defaults)")->required();
    trans->add_option("--a", trans_a.a, "translation velocity components")->required()->delimiter(',');
    trans->add_option("--b", trans_a.b, "linear-term coefficients (default: A a)")->delimiter(',');
    trans->add_option("--c", trans_a.c, "constant (default: angle(A))");
    trans->add_option("--static-tol", trans_a.static_tol, "static residual tolerance");
    trans->add_option("--dynamic-tol", trans_a.dynamic_tol, "dynamic defect tolerance");
    add_grid(trans, trans_a.grid);
    add_config(trans, trans_a.config);
    add_common(trans, trans_a.common);

    CLI::App* blow = app.add_subcommand("blowdown", "blow-down sequence lambda^-2 u(lambda x) with gap report");
    blow->add_option("--field", blow_a.field_file, "potential field file")->required();
    blow->add_option("--lambdas", blow_a.lambdas, "scales (default 2,3,4)")->delimiter(',');
    add_common(blow, blow_a.common);

    CLI::App* conv = app.add_subcommand("convergence-study", "spatial order under h-halving and residual stability under R-doubling");
    add_common(conv, conv_common);

    CLI::App* preset = app.add_subcommand("preset", "run a named experiment preset end to end");
    preset->add_option("name", preset_name, "preset name (see --list)");
    preset->add_flag("--list", preset_list, "list preset names and exit");
    add_common(preset, preset_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // all parse/usage problems map to exit 1
    }

    auto guarded = [](const std::function<int()>& fn) -> int {
        try {
            return fn();
        } catch (const lf::usage_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        } catch (const lf::tolerance_error& e) {
            std::cerr << "tolerance not met: " << e.what() << "\n";
            return 3;
        } catch (const lf::numerical_error& e) {
            std::cerr << "numerical failure: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    };

    if (flow->parsed()) {
        if (flow_a.common.run_id.empty()) flow_a.common.run_id = "flow";
        return guarded([&] { return run_flow_cmd(flow_a, false); });
    }
    if (resc->parsed()) {
        if (resc_a.common.run_id.empty()) resc_a.common.run_id = "rescaled_flow";
        return guarded([&] { return run_flow_cmd(resc_a, true); });
    }
    if (mkexp->parsed()) {
        if (mkexp_a.common.run_id.empty()) mkexp_a.common.run_id = "expander";
        return guarded([&] { return run_make_expander(mkexp_a); });
    }
    if (probe->parsed()) {
        if (probe_a.common.run_id.empty()) probe_a.common.run_id = "shrinker_probe";
        return guarded([&] { return run_probe_shrinker(probe_a); });
    }
    if (trans->parsed()) {
        if (trans_a.common.run_id.empty()) trans_a.common.run_id = "translator";
        return guarded([&] { return run_check_translator(trans_a); });
    }
    if (blow->parsed()) {
        if (blow_a.common.run_id.empty()) blow_a.common.run_id = "blowdown";
        return guarded([&] { return run_blowdown(blow_a); });
    }
    if (conv->parsed()) {
        return guarded([&] {
            apply_kernel(conv_common);
            return print_checks(
                lf::experiments::convergence_study(conv_common.out_dir, resolve_workers(conv_common)));
        });
    }
    if (preset->parsed()) {
        return guarded([&] {
            if (preset_list || preset_name.empty()) {
                for (const std::string& n : lf::experiments::preset_names()) std::cout << n << "\n";
                return 0;
            }
            apply_kernel(preset_common);
            const auto r = lf::experiments::run_preset(preset_name, preset_common.out_dir,
                                                       resolve_workers(preset_common));
            std::cout << "preset " << r.name << ":\n";
            return print_checks(r);
        });
    }
    return 1;
}
