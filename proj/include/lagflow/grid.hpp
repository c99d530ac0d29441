#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "lagflow/errors.hpp"

namespace lagflow {

inline constexpr int kMaxDim = 3;

// Uniform tensor grid on [-R, R]^dim with m points per axis (m odd so the
// origin is a lattice point), spacing h = 2R/(m-1). Flat storage is row-major
// with axis 0 slowest.
struct Grid {
    int dim = 0;
    double radius = 0.0;
    int m = 0;
    double h = 0.0;

    Grid() = default;
    Grid(int dim_, double radius_, int m_) : dim(dim_), radius(radius_), m(m_) {
        if (dim < 1 || dim > kMaxDim) throw usage_error("Grid: dim must be 1, 2, or 3");
        if (!(radius > 0.0)) throw usage_error("Grid: radius must be positive");
        if (m < 5 || m % 2 == 0) throw usage_error("Grid: m must be odd and >= 5");
        h = 2.0 * radius / static_cast<double>(m - 1);
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && radius == o.radius && m == o.m;
    }

    std::size_t num_points() const {
        std::size_t n = 1;
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(m);
        return n;
    }

    // Stride of one index step along `axis` in flat storage.
    std::ptrdiff_t stride(int axis) const {
        std::ptrdiff_t s = 1;
        for (int d = axis + 1; d < dim; ++d) s *= m;
        return s;
    }

    double coord(int index) const { return -radius + h * static_cast<double>(index); }

    int origin_index() const { return (m - 1) / 2; }
    std::size_t origin_flat() const {
        std::size_t f = 0;
        for (int d = 0; d < dim; ++d) f = f * static_cast<std::size_t>(m) + static_cast<std::size_t>(origin_index());
        return f;
    }

    std::size_t flatten(const std::array<int, kMaxDim>& idx) const {
        std::size_t f = 0;
        for (int d = 0; d < dim; ++d) f = f * static_cast<std::size_t>(m) + static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
        return f;
    }
    void unflatten(std::size_t flat, std::array<int, kMaxDim>& idx) const {
        for (int d = dim - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(m));
            flat /= static_cast<std::size_t>(m);
        }
        for (int d = dim; d < kMaxDim; ++d) idx[static_cast<std::size_t>(d)] = 0;
    }

    void coords_of(const std::array<int, kMaxDim>& idx, std::array<double, kMaxDim>& x) const {
        for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = coord(idx[static_cast<std::size_t>(d)]);
        for (int d = dim; d < kMaxDim; ++d) x[static_cast<std::size_t>(d)] = 0.0;
    }

    // True if any index sits on the outermost shell.
    bool on_boundary(const std::array<int, kMaxDim>& idx) const {
        for (int d = 0; d < dim; ++d) {
            int i = idx[static_cast<std::size_t>(d)];
            if (i == 0 || i == m - 1) return true;
        }
        return false;
    }

    // True if every index is at least `margin` cells away from the boundary.
    bool in_margin_interior(const std::array<int, kMaxDim>& idx, int margin) const {
        for (int d = 0; d < dim; ++d) {
            int i = idx[static_cast<std::size_t>(d)];
            if (i < margin || i > m - 1 - margin) return false;
        }
        return true;
    }
};

} // namespace lagflow
