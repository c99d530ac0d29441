#include "lagflow/field.hpp"

#include <cmath>

namespace lagflow {

void add_compact_bump(ScalarField& u, const std::array<double, kMaxDim>& center,
                      double amplitude, double width) {
    const Grid& g = u.grid;
    if (!(width > 0.0)) throw usage_error("add_compact_bump: width must be positive");
    const double cut = 4.0 * width;
    for (int d = 0; d < g.dim; ++d) {
        double c = center[static_cast<std::size_t>(d)];
        if (c - cut < -g.radius || c + cut > g.radius)
            throw usage_error("add_compact_bump: support ball (radius 4*width) leaves the domain");
    }
    const double tail = std::exp(-16.0);
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    for (std::size_t f = 0; f < u.size(); ++f) {
        g.unflatten(f, idx);
        g.coords_of(idx, x);
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            double dx = x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)];
            r2 += dx * dx;
        }
        if (r2 <= cut * cut)
            u.v[f] += amplitude * (std::exp(-r2 / (width * width)) - tail);
    }
}

double multilinear_interpolate(const ScalarField& u, const std::array<double, kMaxDim>& x) {
    const Grid& g = u.grid;
    std::array<int, kMaxDim> base{};
    std::array<double, kMaxDim> frac{};
    for (int d = 0; d < g.dim; ++d) {
        double xd = x[static_cast<std::size_t>(d)];
        if (xd < -g.radius || xd > g.radius)
            throw usage_error("multilinear_interpolate: point outside the domain");
        double t = (xd + g.radius) / g.h;
        int i = static_cast<int>(std::floor(t));
        if (i < 0) i = 0;
        if (i > g.m - 2) i = g.m - 2;
        base[static_cast<std::size_t>(d)] = i;
        frac[static_cast<std::size_t>(d)] = t - static_cast<double>(i);
    }
    double acc = 0.0;
    const int corners = 1 << g.dim;
    std::array<int, kMaxDim> idx{};
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int d = 0; d < g.dim; ++d) {
            int bit = (c >> d) & 1;
            idx[static_cast<std::size_t>(d)] = base[static_cast<std::size_t>(d)] + bit;
            double fd = frac[static_cast<std::size_t>(d)];
            w *= bit ? fd : (1.0 - fd);
        }
        if (w != 0.0) acc += w * u.at(g.flatten(idx));
    }
    return acc;
}

ScaledEvaluator scaling_transform(const ScalarField& u, double lambda) {
    if (!(lambda > 0.0)) throw usage_error("scaling_transform: lambda must be positive");
    return ScaledEvaluator{&u, lambda};
}

} // namespace lagflow
