#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lagflow/closure.hpp"
#include "lagflow/config.hpp"
#include "lagflow/field.hpp"

namespace lagflow {

namespace detail {
struct InteriorEval;
}

enum class FlowKind {
    physical,            // du/dt = G(D2u)
    rescaled_expander,   // dv/ds = G(D2v) - v + (1/2) x . grad v
    normalized_shrinker, // dw/ds = G(D2w) + w - (1/2) y . grad w, gauge-projected
};

const char* flow_kind_name(FlowKind k);
FlowKind parse_flow_kind(const std::string& name); // "physical" | "rescaled-expander" | "normalized-shrinker"

struct FlowState {
    ScalarField field;
    double time = 0.0;
    long step_count = 0;
};

// One report row; every norm is recomputable bitwise from the snapshot taken
// at the same instant (see diagnostics):
//   residual_sup  physical: minimality defect; rescaled: sup-margin |residual|
//   change_rate   sup-margin |instantaneous RHS|  (equals residual_sup on
//                 rescaled flows, where the RHS is the soliton residual)
//   defect        self_similarity_defect(t/2, t) when a snapshot at t/2
//                 exists (physical flow), else 0
struct ReportRow {
    long step = 0;
    double time = 0.0;
    double residual_sup = 0.0;
    double hess_min = 0.0;
    double hess_max = 0.0;
    double d3_sup = 0.0;
    double d3_sqrt_t = 0.0;
    double defect = 0.0;
    double change_rate = 0.0;
};

struct Snapshot {
    long step = 0;
    double time = 0.0;
    ScalarField field;
};

struct FlowReport {
    std::vector<ReportRow> rows;
    std::vector<Snapshot> snapshots;
    bool stopped_early = false;
    std::string stop_reason;

    // Index of the snapshot at time t (relative tolerance 1e-9), or -1.
    int snapshot_at(double t) const;
};

// Sup over the shared probe window of |t1^-2 ... | scaling comparison
//   | u(sqrt(t1) x, t1)/t1 - u(sqrt(t2) x, t2)/t2 |
// between two recorded snapshots; zero exactly on self-expanding solutions.
double self_similarity_defect(const FlowReport& report, double t1, double t2, int margin);

// Explicit RK2 (midpoint) integrator for the three flows on a truncated
// domain. Boundary-shell cells are pinned to the closure at every stage time;
// the normalized shrinker flow additionally removes the constant and linear
// gauge modes after each step by matching value and gradient at the origin to
// the initial reference. All state updates are bitwise independent of the
// worker count.
class FlowEngine {
  public:
    FlowEngine(FlowKind kind, const BoundaryClosure& closure, const RunConfig& cfg, int workers = 1);
    ~FlowEngine();

    // Sets the initial state (copies u0, pins the ring at t0).
    void start(const ScalarField& u0, double t0 = 0.0);

    // Normalized shrinker flow only: origin value/gradient the gauge
    // projection pins the state to. Defaults to the initial field's own
    // origin data; callers with an exact quadratic reference override it.
    void set_gauge_reference(double value0, const std::array<double, kMaxDim>& grad0);

    const ScalarField& field() const { return state_.field; }
    const FlowState& state() const { return state_; }
    double time() const { return state_.time; }
    long step_count() const { return state_.step_count; }
    FlowKind kind() const { return kind_; }

    // Largest stable step for this grid/flow (before dt_safety is applied,
    // the bound; after, the nominal step actually used by run()).
    double nominal_dt() const;

    // One RK2 step of exactly dt. Throws numerical_error on blow-up.
    void advance(double dt);

    // Runs from the current state to the last mark, hitting every mark time
    // exactly (snapshot + report row there), adding report rows every
    // snapshot_stride steps, and stopping early on sustained stationarity
    // (rescaled flows, stationarity_tol > 0). Marks must be increasing and
    // beyond the current time.
    FlowReport run(const std::vector<double>& marks);

    // Sup-margin |field change| / dt of the most recent step (stationarity measure).
    double last_rate() const { return last_rate_; }

  private:
    void pin_ring(std::vector<double>& v, double t) const;
    void rhs(const std::vector<double>& u, double* out) const;
    void gauge_project(std::vector<double>& v);
    void check_finite() const;
    ReportRow make_row(const FlowReport& report) const;

    FlowKind kind_;
    BoundaryClosure closure_;
    RunConfig cfg_;
    int workers_;
    FlowState state_;
    double last_rate_ = 0.0;

    struct RingPin {
        std::size_t flat;
        double quad;  // cone value at the cell
        double angle; // sector angle at the cell
    };
    std::vector<RingPin> ring_;
    std::unique_ptr<detail::InteriorEval> eval_;
    double gauge_value0_ = 0.0;               // reference w(0)
    std::array<double, kMaxDim> gauge_grad0_{}; // reference grad w(0)

    // scratch (sized on start)
    std::vector<double> k1_, k2_, mid_, diff_;
};

// Single-step conveniences mirroring the engine with the matching closure
// discipline (frozen for physical, stationary otherwise). dt defaults to the
// nominal stable step for the grid.
FlowState step_physical(const FlowState& s, const BoundaryClosure& closure, const RunConfig& cfg,
                        int workers = 1, double dt = 0.0);
FlowState step_rescaled_expander(const FlowState& s, const BoundaryClosure& closure,
                                 const RunConfig& cfg, int workers = 1, double dt = 0.0);
FlowState step_normalized_shrinker(const FlowState& s, const BoundaryClosure& closure,
                                   const RunConfig& cfg, int workers = 1, double dt = 0.0);

// One linearized backward-Euler step of the physical flow (frozen
// coefficients (I + A^2)^-1, diagonally preconditioned CG to relative
// residual 1e-10). Serial; provided for stiff exploration.
FlowState step_physical_implicit(const FlowState& s, const BoundaryClosure& closure,
                                 const RunConfig& cfg, double dt);

// Full run from u0: validates the kind/closure pairing, warns (stderr) when u0
// violates Condition A at margin delta, integrates to cfg.horizon with the
// given intermediate snapshot marks (horizon is appended automatically).
std::pair<FlowState, FlowReport> run_flow(const ScalarField& u0, const BoundaryClosure& closure,
                                          const RunConfig& cfg, FlowKind kind, int workers = 1,
                                          std::vector<double> marks = {}, double t0 = 0.0);

} // namespace lagflow
