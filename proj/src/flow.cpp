#include "lagflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "interior_ops.hpp"
#include "lagflow/diagnostics.hpp"
#include "lagflow/kernels.hpp"
#include "lagflow/parallel.hpp"
#include "lagflow/stencils.hpp"

namespace lagflow {

namespace {

constexpr double kBlowupSup = 1e15;
constexpr int kStationaryRuns = 10;

// Full-array dst[i] = u[i] + a*k[i], block-parallel (element-wise, so the
// partition cannot change results).
void combine_parallel(double* dst, const double* u, double a, const double* k, std::size_t n,
                      int workers) {
    parallel_for_blocks(n, workers, [&](int, std::size_t b, std::size_t e) {
        kernels::combine(dst + b, u + b, a, k + b, e - b);
    });
}

// Sup of |a - b| over the margin interior, by row segments in fixed order.
double sup_abs_diff_interior(const double* a, const double* b, const Grid& g, int margin) {
    namespace kn = lagflow::kernels;
    const std::size_t seg = static_cast<std::size_t>(g.m - 2 * margin);
    double sup = 0.0;
    auto consider = [&](std::size_t base) {
        double s = kn::sup_abs_diff(a + base, b + base, seg);
        if (s > sup) sup = s;
    };
    if (g.dim == 1) {
        consider(static_cast<std::size_t>(margin));
    } else if (g.dim == 2) {
        for (int i0 = margin; i0 <= g.m - 1 - margin; ++i0)
            consider(static_cast<std::size_t>(i0) * static_cast<std::size_t>(g.m) +
                     static_cast<std::size_t>(margin));
    } else {
        for (int i0 = margin; i0 <= g.m - 1 - margin; ++i0)
            for (int i1 = margin; i1 <= g.m - 1 - margin; ++i1)
                consider((static_cast<std::size_t>(i0) * static_cast<std::size_t>(g.m) +
                          static_cast<std::size_t>(i1)) *
                             static_cast<std::size_t>(g.m) +
                         static_cast<std::size_t>(margin));
    }
    return sup;
}

} // namespace

const char* flow_kind_name(FlowKind k) {
    switch (k) {
    case FlowKind::physical: return "physical";
    case FlowKind::rescaled_expander: return "rescaled-expander";
    default: return "normalized-shrinker";
    }
}

FlowKind parse_flow_kind(const std::string& name) {
    if (name == "physical") return FlowKind::physical;
    if (name == "rescaled-expander" || name == "expander") return FlowKind::rescaled_expander;
    if (name == "normalized-shrinker" || name == "shrinker") return FlowKind::normalized_shrinker;
    throw usage_error("unknown flow kind '" + name +
                      "' (physical | rescaled-expander | normalized-shrinker)");
}

int FlowReport::snapshot_at(double t) const {
    const double tol = 1e-9 * std::max(1.0, std::fabs(t));
    for (std::size_t i = 0; i < snapshots.size(); ++i)
        if (std::fabs(snapshots[i].time - t) <= tol) return static_cast<int>(i);
    return -1;
}

double self_similarity_defect(const FlowReport& report, double t1, double t2, int margin) {
    if (!(t1 > 0.0) || !(t2 > 0.0))
        throw usage_error("self_similarity_defect: snapshot times must be positive");
    int i1 = report.snapshot_at(t1);
    int i2 = report.snapshot_at(t2);
    if (i1 < 0 || i2 < 0) throw usage_error("self_similarity_defect: missing snapshot");
    if (i1 == i2) return 0.0;
    const ScalarField& u1 = report.snapshots[static_cast<std::size_t>(i1)].field;
    const ScalarField& u2 = report.snapshots[static_cast<std::size_t>(i2)].field;
    const Grid& g = u1.grid;
    const double r1 = std::sqrt(t1), r2 = std::sqrt(t2);
    const double reach = std::max(r1, r2);
    const double rmax = g.radius - static_cast<double>(margin) * g.h;
    if (!(rmax > 0.0)) throw usage_error("self_similarity_defect: margin leaves no window");

    double defect = 0.0;
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{}, y1{}, y2{};
    for (std::size_t f = 0; f < g.num_points(); ++f) {
        g.unflatten(f, idx);
        g.coords_of(idx, x);
        bool inside = true;
        for (int d = 0; d < g.dim; ++d)
            if (std::fabs(x[static_cast<std::size_t>(d)]) * reach > rmax) {
                inside = false;
                break;
            }
        if (!inside) continue;
        for (int d = 0; d < g.dim; ++d) {
            y1[static_cast<std::size_t>(d)] = r1 * x[static_cast<std::size_t>(d)];
            y2[static_cast<std::size_t>(d)] = r2 * x[static_cast<std::size_t>(d)];
        }
        double a = multilinear_interpolate(u1, y1) / t1;
        double b = multilinear_interpolate(u2, y2) / t2;
        double dv = std::fabs(a - b);
        if (dv > defect) defect = dv;
    }
    return defect;
}

FlowEngine::FlowEngine(FlowKind kind, const BoundaryClosure& closure, const RunConfig& cfg,
                       int workers)
    : kind_(kind), closure_(closure), cfg_(cfg), workers_(workers) {
    cfg_.validate();
    if (workers_ < 1) throw usage_error("FlowEngine: workers must be >= 1");
    switch (kind_) {
    case FlowKind::physical:
        if (closure_.kind != ClosureKind::frozen_hessian_dirichlet)
            throw usage_error("physical flow requires the frozen-Hessian Dirichlet closure");
        break;
    case FlowKind::rescaled_expander:
        if ((closure_.kind != ClosureKind::stationary_cone_dirichlet &&
             closure_.kind != ClosureKind::relaxing_cone_dirichlet) ||
            closure_.sign <= 0.0)
            throw usage_error(
                "rescaled expander flow requires a cone closure with expander sign");
        break;
    case FlowKind::normalized_shrinker:
        if (closure_.kind != ClosureKind::stationary_cone_dirichlet || closure_.sign >= 0.0)
            throw usage_error(
                "normalized shrinker flow requires the stationary cone closure with shrinker sign");
        break;
    }
}

FlowEngine::~FlowEngine() = default;

void FlowEngine::start(const ScalarField& u0, double t0) {
    const Grid& g = u0.grid;
    if (closure_.cone.dim != g.dim)
        throw usage_error("FlowEngine: closure cone dimension does not match the grid");
    state_.field = u0;
    state_.time = t0;
    state_.step_count = 0;
    last_rate_ = 0.0;

    detail::RhsMode mode = kind_ == FlowKind::physical ? detail::RhsMode::angle_only
                           : kind_ == FlowKind::rescaled_expander ? detail::RhsMode::expander
                                                                  : detail::RhsMode::shrinker;
    eval_ = std::make_unique<detail::InteriorEval>(g, mode);

    ring_.clear();
    std::array<double, kMaxDim> x{};
    detail::for_each_ring_cell(g, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        g.coords_of(idx, x);
        ring_.push_back(RingPin{f, closure_.cone.value(x), closure_.cone.angle_at(x)});
    });

    const std::size_t n = g.num_points();
    k1_.assign(n, 0.0);
    k2_.assign(n, 0.0);
    mid_.assign(n, 0.0);
    diff_.assign(n, 0.0);

    if (kind_ == FlowKind::normalized_shrinker) {
        const std::size_t o = g.origin_flat();
        gauge_value0_ = state_.field.v[o];
        const double i2h = 1.0 / (2.0 * g.h);
        for (int d = 0; d < g.dim; ++d) {
            const std::ptrdiff_t s = g.stride(d);
            gauge_grad0_[static_cast<std::size_t>(d)] =
                i2h * (state_.field.v[o + static_cast<std::size_t>(s)] -
                       state_.field.v[o - static_cast<std::size_t>(s)]);
        }
    }

    pin_ring(state_.field.v, t0);
}

void FlowEngine::set_gauge_reference(double value0, const std::array<double, kMaxDim>& grad0) {
    if (kind_ != FlowKind::normalized_shrinker)
        throw usage_error("gauge reference applies only to the normalized shrinker flow");
    gauge_value0_ = value0;
    gauge_grad0_ = grad0;
}

double FlowEngine::nominal_dt() const {
    const Grid& g = state_.field.grid;
    if (g.dim == 0) throw usage_error("FlowEngine: start() must be called first");
    double bound = g.h * g.h / (2.0 * static_cast<double>(g.dim));
    if (kind_ != FlowKind::physical) {
        // drift CFL plus the RK2 damping budget for the centered drift term
        bound = std::min(bound, g.h / std::max(g.radius / 2.0, g.h));
        bound = std::min(bound, 4.0 / (g.radius * g.radius));
    }
    return cfg_.dt_safety * bound;
}

void FlowEngine::pin_ring(std::vector<double>& v, double t) const {
    const double tau = closure_.tau(t);
    for (const RingPin& p : ring_) v[p.flat] = p.quad + tau * p.angle;
}

void FlowEngine::rhs(const std::vector<double>& u, double* out) const {
    eval_->eval(u.data(), out, workers_, 0);
}

void FlowEngine::gauge_project(std::vector<double>& v) {
    const Grid& g = state_.field.grid;
    const std::size_t o = g.origin_flat();
    const double c0 = v[o] - gauge_value0_;
    std::array<double, kMaxDim> gd{};
    const double i2h = 1.0 / (2.0 * g.h);
    for (int d = 0; d < g.dim; ++d) {
        const std::ptrdiff_t s = g.stride(d);
        gd[static_cast<std::size_t>(d)] =
            i2h * (v[o + static_cast<std::size_t>(s)] - v[o - static_cast<std::size_t>(s)]) -
            gauge_grad0_[static_cast<std::size_t>(d)];
    }
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    for (std::size_t f = 0; f < v.size(); ++f) {
        g.unflatten(f, idx);
        g.coords_of(idx, x);
        double lin = c0;
        for (int d = 0; d < g.dim; ++d)
            lin += gd[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
        v[f] -= lin;
    }
}

void FlowEngine::check_finite() const {
    const std::vector<double>& v = state_.field.v;
    const bool finite = kernels::all_finite(v.data(), v.size());
    const double sup = kernels::sup_abs(v.data(), v.size());
    if (finite && sup <= kBlowupSup) return;
    // Locate the worst cell for the error message.
    std::size_t worst = 0;
    double worstval = -1.0;
    for (std::size_t f = 0; f < v.size(); ++f) {
        if (!std::isfinite(v[f])) {
            worst = f;
            worstval = v[f];
            break;
        }
        if (std::fabs(v[f]) > worstval) {
            worst = f;
            worstval = std::fabs(v[f]);
        }
    }
    std::array<int, kMaxDim> idx{};
    state_.field.grid.unflatten(worst, idx);
    std::ostringstream oss;
    oss << "flow blow-up at step " << state_.step_count << ", time " << state_.time << ", cell (";
    for (int d = 0; d < state_.field.grid.dim; ++d)
        oss << (d ? "," : "") << idx[static_cast<std::size_t>(d)];
    oss << ")";
    throw numerical_error(oss.str());
}

void FlowEngine::advance(double dt) {
    if (!(dt > 0.0)) throw usage_error("FlowEngine::advance: dt must be positive");
    const Grid& g = state_.field.grid;
    if (g.dim == 0) throw usage_error("FlowEngine: start() must be called first");
    std::vector<double>& u = state_.field.v;
    const double t = state_.time;

    rhs(u, k1_.data());
    combine_parallel(mid_.data(), u.data(), 0.5 * dt, k1_.data(), u.size(), workers_);
    pin_ring(mid_, t + 0.5 * dt);
    rhs(mid_, k2_.data());
    combine_parallel(diff_.data(), u.data(), dt, k2_.data(), u.size(), workers_);
    pin_ring(diff_, t + dt);
    if (kind_ == FlowKind::normalized_shrinker) gauge_project(diff_);

    last_rate_ = sup_abs_diff_interior(diff_.data(), u.data(), g, cfg_.margin) / dt;
    u.swap(diff_);
    state_.time = t + dt;
    state_.step_count += 1;
    check_finite();
}

ReportRow FlowEngine::make_row(const FlowReport& report) const {
    ReportRow row;
    row.step = state_.step_count;
    row.time = state_.time;
    const ScalarField& u = state_.field;
    const GhostView gv = at_time(closure_, state_.time);
    const int margin = cfg_.margin;

    if (kind_ == FlowKind::physical) {
        row.residual_sup = minimality_defect(u, gv, margin);
        row.change_rate = sup_abs_interior(angle_field(hessian(u, gv)), margin);
    } else {
        ScalarField res = kind_ == FlowKind::rescaled_expander ? expander_residual(u, gv)
                                                               : shrinker_residual(u, gv);
        row.residual_sup = sup_abs_interior(res, margin);
        row.change_rate = row.residual_sup;
    }
    auto range = hessian_range(u, margin);
    row.hess_min = range.first;
    row.hess_max = range.second;
    row.d3_sup = d3_sup(u, gv, margin);
    row.d3_sqrt_t = state_.time > 0.0 ? row.d3_sup * std::sqrt(state_.time) : 0.0;
    row.defect = 0.0;
    if (kind_ == FlowKind::physical && state_.time > 0.0) {
        const double half = state_.time / 2.0;
        if (report.snapshot_at(half) >= 0 && report.snapshot_at(state_.time) >= 0)
            row.defect = self_similarity_defect(report, half, state_.time, margin);
    }
    return row;
}

FlowReport FlowEngine::run(const std::vector<double>& marks) {
    const Grid& g = state_.field.grid;
    if (g.dim == 0) throw usage_error("FlowEngine: start() must be called first");
    if (marks.empty()) throw usage_error("FlowEngine::run: no marks given");
    double prev = state_.time;
    for (double mk : marks) {
        if (!(mk > prev))
            throw usage_error("FlowEngine::run: marks must be strictly increasing and in the future");
        prev = mk;
    }

    FlowReport report;
    auto take_snapshot = [&]() {
        report.snapshots.push_back(Snapshot{state_.step_count, state_.time, state_.field});
    };
    auto push_row = [&]() {
        if (!report.rows.empty() && report.rows.back().step == state_.step_count) return;
        report.rows.push_back(make_row(report));
    };

    take_snapshot();
    push_row();

    const double dtn = nominal_dt();
    const bool rescaled = kind_ != FlowKind::physical;
    int stationary_run = 0;

    for (double mark : marks) {
        const double seg = mark - state_.time;
        const long nsteps = std::max(1L, static_cast<long>(std::ceil(seg / dtn - 1e-9)));
        const double dt = seg / static_cast<double>(nsteps);
        for (long k = 0; k < nsteps; ++k) {
            advance(dt);
            if (k == nsteps - 1) state_.time = mark; // land exactly on the mark
            if (rescaled && cfg_.stationarity_tol > 0.0) {
                stationary_run = last_rate_ <= cfg_.stationarity_tol ? stationary_run + 1 : 0;
                if (stationary_run >= kStationaryRuns) {
                    take_snapshot();
                    push_row();
                    report.stopped_early = true;
                    report.stop_reason = "stationary";
                    return report;
                }
            }
            if (k < nsteps - 1 && state_.step_count % cfg_.snapshot_stride == 0) push_row();
        }
        take_snapshot();
        push_row();
    }
    return report;
}

namespace {

FlowState step_once(FlowKind kind, const FlowState& s, const BoundaryClosure& closure,
                    const RunConfig& cfg, int workers, double dt) {
    FlowEngine engine(kind, closure, cfg, workers);
    engine.start(s.field, s.time);
    engine.advance(dt > 0.0 ? dt : engine.nominal_dt());
    FlowState out;
    out.field = engine.field();
    out.time = engine.time();
    out.step_count = s.step_count + 1;
    return out;
}

} // namespace

FlowState step_physical(const FlowState& s, const BoundaryClosure& closure, const RunConfig& cfg,
                        int workers, double dt) {
    return step_once(FlowKind::physical, s, closure, cfg, workers, dt);
}

FlowState step_rescaled_expander(const FlowState& s, const BoundaryClosure& closure,
                                 const RunConfig& cfg, int workers, double dt) {
    return step_once(FlowKind::rescaled_expander, s, closure, cfg, workers, dt);
}

FlowState step_normalized_shrinker(const FlowState& s, const BoundaryClosure& closure,
                                   const RunConfig& cfg, int workers, double dt) {
    return step_once(FlowKind::normalized_shrinker, s, closure, cfg, workers, dt);
}

std::pair<FlowState, FlowReport> run_flow(const ScalarField& u0, const BoundaryClosure& closure,
                                          const RunConfig& cfg, FlowKind kind, int workers,
                                          std::vector<double> marks, double t0) {
    cfg.validate();
    if (!(cfg.horizon > t0))
        throw usage_error("run_flow: horizon must lie beyond the start time");

    ConditionA cond = check_condition_a(u0, cfg.delta, at_time(closure, t0));
    if (!cond.pass)
        std::fprintf(stderr,
                     "warning: initial data violates Condition A (margin = %.3e); running anyway\n",
                     cond.margin);

    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    if (marks.empty() || marks.back() < cfg.horizon) marks.push_back(cfg.horizon);
    if (!marks.empty() && marks.back() > cfg.horizon)
        throw usage_error("run_flow: snapshot marks beyond the horizon");

    FlowEngine engine(kind, closure, cfg, workers);
    engine.start(u0, t0);
    FlowReport report = engine.run(marks);
    return {engine.state(), std::move(report)};
}

} // namespace lagflow
