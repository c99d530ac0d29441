#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lagflow/cone.hpp"
#include "lagflow/config.hpp"
#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"

namespace lagflow {

enum class SolitonKind { expander, shrinker };

// The quadratic solitons: u(x) = (1/2) x^T A x + constant with
// constant = +angle(A) (expander) or -angle(A) (shrinker); both residuals
// vanish identically, and the stencils reproduce that to roundoff.
struct QuadraticSoliton {
    SymMatrix A;
    SolitonKind kind = SolitonKind::expander;
    double constant = 0.0;
};

// Validates spectral radius < 1 and fills in the matching constant.
QuadraticSoliton quadratic_soliton(const SymMatrix& A, SolitonKind kind);
ScalarField sample_soliton(const QuadraticSoliton& q, const Grid& grid);

// Machine-readable evidence record for a constructed or probed soliton.
// residual_sup_interior always equals the sup of |residual_field| over the
// margin interior (recomputable from the field).
struct SolitonCertificate {
    std::string kind;
    double residual_sup_interior = 0.0;
    ScalarField residual_field;
    double condition_a_margin = 0.0;
    double d3_sup = 0.0;
    std::map<std::string, std::string> provenance;
};

// Runs the rescaled expander flow from the sampled cone until stationarity
// (or cfg.horizon), and certifies the result. Throws usage_error when the
// cone violates Condition A at margin cfg.delta, tolerance_error when the
// final interior residual exceeds cfg.residual_tol.
std::pair<ScalarField, SolitonCertificate> make_expander(const ConeSpec& cone, const Grid& grid,
                                                         const RunConfig& cfg, int workers = 1);

// Discrete blow-down of an expander potential: radial extrapolation from the
// largest usable radius r = R - margin*h onto the unit-scale window
// (|x| below one parent cell falls back to the origin-Hessian quadratic).
// The homogenization defect of the exact quadratic part is angle/r^2 by
// construction; callers budget tolerance as max|sector angle|/r^2 + O(h^2).
ScalarField cone_of_expander(const ScalarField& v, int margin = 4);

// Sup distance from the best least-squares quadratic (basis 1, x_i, x_i x_j)
// over the margin interior — the measurable form of "is a quadratic".
double quadratic_fit_distance(const ScalarField& u, int margin);

struct ShrinkerProbe {
    SolitonCertificate cert;
    FlowReport report;
    std::vector<double> fit_distances; // best-fit-quadratic distance per snapshot
    double d3_initial = 0.0;
    double d3_final = 0.0;
};

// Runs the normalized shrinker flow (gauge pinned to the reference quadratic)
// from w0 and reports the d3 trajectory plus per-snapshot quadratic-fit
// distances. Throws usage_error when w0 violates Condition A at cfg.delta.
// Default marks: ten uniform snapshot times up to cfg.horizon.
ShrinkerProbe probe_shrinker(const ScalarField& w0, const QuadraticSoliton& reference,
                             const RunConfig& cfg, int workers = 1,
                             std::vector<double> marks = {});

// Exact degree-2 homogeneity deviation: sup over lambda in {2,3,4} and lattice
// x with lambda*x on-grid of |lambda^-2 u(lambda x) - u(x)|. Needs m >= 9.
double check_condition_b(const ScalarField& u);

struct BlowdownResult {
    std::vector<double> lambdas;     // the usable subset, in input order
    std::vector<ScalarField> fields; // lambda^-2 u(lambda x) on shrinking windows
    std::vector<double> gaps;        // sup |field[k+1] - field[k]| on the common window
};

// Blow-down sequence lambda^-2 u(lambda x); integer lambda evaluates on exact
// lattice points, fractional lambda interpolates. Lambdas whose window would
// drop under 5 points per axis are skipped; all-skipped is an error.
BlowdownResult blowdown(const ScalarField& u, const std::vector<double>& lambdas);

struct TranslatorCheck {
    SolitonCertificate cert;       // residual_sup_interior = static residual
    double static_residual_sup = 0.0;
    double dynamic_defect = 0.0;   // worst snapshot defect vs the exact translator
    FlowReport report;
};

// Static Eq-(3.1)-style residual of the cone's sampled potential, plus the
// dynamic check: the physical flow from u0 compared at snapshot times against
//   u0(x - a t) + (b.x) t + c t - (1/2)(a.b) t^2,
// the exact translating solution (the quadratic-in-t term is the potential
// gauge of the translation; the graph itself moves rigidly). Snapshot times
// must keep a*t on whole lattice cells so the comparison needs no
// interpolation. Default marks: just cfg.horizon.
TranslatorCheck check_translator(const ConeSpec& cone, const std::array<double, kMaxDim>& a,
                                 const std::array<double, kMaxDim>& b, double c, const Grid& grid,
                                 const RunConfig& cfg, int workers = 1,
                                 std::vector<double> marks = {});

} // namespace lagflow
