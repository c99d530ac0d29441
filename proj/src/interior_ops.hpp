#pragma once

// Shared interior evaluation pipeline. The flow engine's stage RHS and the
// public residual operators run the exact same kernel sequence over the same
// row decomposition, which is what makes every report row recomputable from
// its snapshot to bitwise equality.

#include <array>
#include <cstddef>
#include <vector>

#include "lagflow/field.hpp"
#include "lagflow/grid.hpp"

namespace lagflow::detail {

enum class RhsMode { angle_only, expander, shrinker, translator };

// Row decomposition of the 1-cell interior: each row is a contiguous span of
// m-2 cells along the innermost axis.
inline long interior_row_count(const Grid& g) {
    long inner = g.m - 2;
    if (g.dim == 1) return 1;
    if (g.dim == 2) return inner;
    return inner * inner;
}

// Flat index of the first cell (inner index 1) of interior row r, plus the
// row's outer lattice indices (i0; i1 only for dim 3).
inline std::size_t interior_row_base(const Grid& g, long r, int& i0, int& i1) {
    const long m = g.m;
    if (g.dim == 1) {
        i0 = -1;
        i1 = -1;
        return 1;
    }
    if (g.dim == 2) {
        i0 = static_cast<int>(1 + r);
        i1 = -1;
        return static_cast<std::size_t>(i0) * static_cast<std::size_t>(m) + 1;
    }
    i0 = static_cast<int>(1 + r / (m - 2));
    i1 = static_cast<int>(1 + r % (m - 2));
    return (static_cast<std::size_t>(i0) * static_cast<std::size_t>(m) + static_cast<std::size_t>(i1)) *
               static_cast<std::size_t>(m) +
           1;
}

struct InteriorEval {
    Grid grid;
    RhsMode mode;
    std::vector<double> axis_coord;      // coord(i), i in [0, m)
    std::array<double, kMaxDim> avec{};  // translator drift coefficients
    const double* lin = nullptr;         // translator: full-grid (b.x + c) samples

    InteriorEval(const Grid& g, RhsMode m);

    // Writes the configured RHS on every 1-cell-interior point of u into out
    // (full-size array, ring cells untouched) and returns sup|out| over the
    // margin-interior region. Bitwise independent of `workers`.
    double eval(const double* u, double* out, int workers, int margin) const;
};

// Serial visit of every lattice cell at least `margin` cells from the
// boundary, in flat (row-major) order.
template <class Fn>
void for_each_margin_cell(const Grid& g, int margin, Fn&& fn) {
    const int lo = margin, hi = g.m - 1 - margin;
    std::array<int, kMaxDim> idx{};
    if (g.dim == 1) {
        for (int i = lo; i <= hi; ++i) {
            idx[0] = i;
            fn(static_cast<std::size_t>(i), idx);
        }
        return;
    }
    if (g.dim == 2) {
        for (int i = lo; i <= hi; ++i)
            for (int j = lo; j <= hi; ++j) {
                idx[0] = i;
                idx[1] = j;
                fn(static_cast<std::size_t>(i) * static_cast<std::size_t>(g.m) + static_cast<std::size_t>(j), idx);
            }
        return;
    }
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j)
            for (int k = lo; k <= hi; ++k) {
                idx[0] = i;
                idx[1] = j;
                idx[2] = k;
                fn((static_cast<std::size_t>(i) * static_cast<std::size_t>(g.m) + static_cast<std::size_t>(j)) *
                       static_cast<std::size_t>(g.m) +
                   static_cast<std::size_t>(k),
                   idx);
            }
}

// Serial visit of every boundary-shell cell (any index 0 or m-1).
template <class Fn>
void for_each_ring_cell(const Grid& g, Fn&& fn) {
    std::array<int, kMaxDim> idx{};
    for (std::size_t f = 0; f < g.num_points(); ++f) {
        g.unflatten(f, idx);
        if (g.on_boundary(idx)) fn(f, idx);
    }
}

} // namespace lagflow::detail
