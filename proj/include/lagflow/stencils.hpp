#pragma once

#include <array>
#include <vector>

#include "lagflow/closure.hpp"
#include "lagflow/field.hpp"
#include "lagflow/sym_matrix.hpp"

namespace lagflow {

// Discrete Hessian samples, one symmetric matrix per lattice point, stored as
// structure-of-arrays planes: diagonal entries first (xx, yy, zz), then the
// off-diagonals in lexicographic pair order (xy, xz, yz).
struct HessianField {
    Grid grid;
    int nplanes = 0;
    std::vector<double> data; // nplanes contiguous planes of grid.num_points()

    HessianField() = default;
    explicit HessianField(const Grid& g)
        : grid(g), nplanes(g.dim * (g.dim + 1) / 2), data(static_cast<std::size_t>(nplanes) * g.num_points(), 0.0) {}

    double* plane(int p) { return data.data() + static_cast<std::size_t>(p) * grid.num_points(); }
    const double* plane(int p) const {
        return data.data() + static_cast<std::size_t>(p) * grid.num_points();
    }
    // Plane index of entry (i, j), i <= j: diagonals first, then pairs.
    int plane_index(int i, int j) const {
        if (i == j) return i;
        // dim 2: (0,1)->2 ; dim 3: (0,1)->3, (0,2)->4, (1,2)->5
        if (grid.dim == 2) return 2;
        return 3 + (i == 0 ? j - 1 : 2);
    }
    SymMatrix at(std::size_t flat) const {
        SymMatrix A(grid.dim);
        for (int i = 0; i < grid.dim; ++i)
            for (int j = i; j < grid.dim; ++j) A.at(i, j) = plane(plane_index(i, j))[flat];
        return A;
    }
};

// Gradient samples, one plane per axis.
struct VectorField {
    Grid grid;
    std::vector<double> data;

    VectorField() = default;
    explicit VectorField(const Grid& g)
        : grid(g), data(static_cast<std::size_t>(g.dim) * g.num_points(), 0.0) {}

    double* plane(int axis) { return data.data() + static_cast<std::size_t>(axis) * grid.num_points(); }
    const double* plane(int axis) const {
        return data.data() + static_cast<std::size_t>(axis) * grid.num_points();
    }
};

// Centered second-order stencils over the full lattice; cells whose stencil
// leaves the grid read ghost values from the closure (usage_error under the
// `none` closure). Exact on global quadratics.
HessianField hessian(const ScalarField& u, const GhostView& ghost);
VectorField gradient(const ScalarField& u, const GhostView& ghost);

// Same stencils restricted to cells one step inside the boundary; needs no
// closure. Boundary-shell rows of the result are left at zero.
HessianField hessian_interior(const ScalarField& u);

// Pointwise Lagrangian angle of a Hessian field.
ScalarField angle_field(const HessianField& H);

// Pointwise soliton residuals over the full lattice:
//   expander:   G(D2v) - v + (1/2) x . grad v
//   shrinker:   G(D2v) + v - (1/2) x . grad v
//   translator: G(D2u0) + a . grad u0 - b . x - c
ScalarField expander_residual(const ScalarField& v, const GhostView& ghost);
ScalarField shrinker_residual(const ScalarField& v, const GhostView& ghost);
ScalarField translator_residual(const ScalarField& u0, const std::array<double, kMaxDim>& a,
                                const std::array<double, kMaxDim>& b, double c,
                                const GhostView& ghost);

// Sup of |f| over cells at least `margin` cells from the boundary.
double sup_abs_interior(const ScalarField& f, int margin);

} // namespace lagflow
