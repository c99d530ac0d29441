#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lagflow/field.hpp"
#include "lagflow/sym_matrix.hpp"

namespace lagflow {

// One sector of a piecewise-quadratic cone: a sign pattern over the axes
// (+1 -> x_d >= 0, -1 -> x_d <= 0, 0 -> unrestricted) and the Hessian A that
// rules there. The sector value at x is the quadratic (1/2) x^T A x, so the
// stored matrices are full Hessians, not half-Hessians.
struct ConeSector {
    std::array<int, kMaxDim> sign{};
    SymMatrix A;
    double angle_value = 0.0; // cached lagrangian_angle(A)

    bool matches(const std::array<double, kMaxDim>& x, int dim) const {
        for (int d = 0; d < dim; ++d) {
            int s = sign[static_cast<std::size_t>(d)];
            double xd = x[static_cast<std::size_t>(d)];
            if (s > 0 && xd < 0.0) return false;
            if (s < 0 && xd > 0.0) return false;
        }
        return true;
    }
};

// A 2-homogeneous piecewise-quadratic potential C(x) = (1/2) x^T A(x) x with
// A(x) constant on sign sectors. Sector lookup is first-match-wins in listed
// order; a point matched by no sector is a coverage gap (usage_error).
struct ConeSpec {
    int dim = 0;
    std::vector<ConeSector> sectors;

    const ConeSector& sector_at(const std::array<double, kMaxDim>& x) const;
    double value(const std::array<double, kMaxDim>& x) const;
    const SymMatrix& hessian_at(const std::array<double, kMaxDim>& x) const;
    double angle_at(const std::array<double, kMaxDim>& x) const;

    // Largest spectral radius over sectors (the pinching ceiling of the cone).
    double max_spectral_radius() const;
    // Largest |angle| over sectors.
    double max_abs_angle() const;

    // Single globally-quadratic "cone" with Hessian A.
    static ConeSpec single(const SymMatrix& A);
    // Sign-flip family: Hessian diag(a1, a2, ..., an) for x1 >= 0 and
    // diag(-a1, a2, ..., an) for x1 <= 0 (continuous across the interface
    // because the matching quadratic vanishes there).
    static ConeSpec sign_flip(const std::vector<double>& a);
};

// Samples C on the grid lattice.
ScalarField sample_cone(const ConeSpec& cone, const Grid& grid);

// Verifies every sector Hessian obeys the pinching bound rho(A) <= 1 - delta;
// returns the worst margin (1 - delta) - max rho (negative = violated).
double cone_pinching_margin(const ConeSpec& cone, double delta);

} // namespace lagflow
