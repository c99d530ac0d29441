#pragma once

#include <array>
#include <vector>

#include "lagflow/grid.hpp"

namespace lagflow {

// Scalar samples of a potential on a Grid, flat row-major (axis 0 slowest).
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), v(g.num_points(), 0.0) {}

    double& at(std::size_t flat) { return v[flat]; }
    double at(std::size_t flat) const { return v[flat]; }
    std::size_t size() const { return v.size(); }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
};

// Adds a truncated Gaussian bump amp * (exp(-|x-c|^2/w^2) - e^{-16}) on the
// ball |x-c| <= 4w and leaves the field untouched outside, so support is
// compact and the result is continuous. Precondition: the 4w-ball lies inside
// the domain. The Hessian of the bump is bounded by 2*amp/w^2 (attained at the
// center), which is the number to budget against a pinching margin.
void add_compact_bump(ScalarField& u, const std::array<double, kMaxDim>& center,
                      double amplitude, double width);

// Multilinear interpolation at an arbitrary in-domain point (clamped to the
// last cell on exact-boundary queries). Throws usage_error outside [-R, R]^n.
double multilinear_interpolate(const ScalarField& u, const std::array<double, kMaxDim>& x);

// Parabolic-scaling view: evaluates lambda^{-2} * u(lambda * x). Evaluation is
// exact (no interpolation error) whenever lambda*x lands on the lattice, which
// multilinear interpolation delivers automatically at nodes.
struct ScaledEvaluator {
    const ScalarField* u = nullptr;
    double lambda = 1.0;

    double operator()(const std::array<double, kMaxDim>& x) const {
        std::array<double, kMaxDim> y{};
        for (int d = 0; d < u->grid.dim; ++d) y[static_cast<std::size_t>(d)] = lambda * x[static_cast<std::size_t>(d)];
        return multilinear_interpolate(*u, y) / (lambda * lambda);
    }
};

// Builds the scaling view; throws usage_error for lambda <= 0.
ScaledEvaluator scaling_transform(const ScalarField& u, double lambda);

} // namespace lagflow
