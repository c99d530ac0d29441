#include "lagflow/stencils.hpp"

#include <algorithm>

#include "interior_ops.hpp"
#include "lagflow/kernels.hpp"

namespace lagflow {

namespace {

// Value at an extended lattice index: grid cell if inside, ghost closure
// value otherwise (lattice coordinates extend linearly past the boundary).
double ghosted(const ScalarField& u, const GhostView& gv, const std::array<int, kMaxDim>& idx) {
    const Grid& g = u.grid;
    bool inside = true;
    for (int d = 0; d < g.dim; ++d) {
        int i = idx[static_cast<std::size_t>(d)];
        if (i < 0 || i >= g.m) {
            inside = false;
            break;
        }
    }
    if (inside) return u.at(g.flatten(idx));
    if (!gv.available())
        throw usage_error("stencil leaves the grid and no ghost closure is available");
    std::array<double, kMaxDim> x{};
    for (int d = 0; d < g.dim; ++d) x[static_cast<std::size_t>(d)] = g.coord(idx[static_cast<std::size_t>(d)]);
    return gv.value(x);
}

std::array<int, kMaxDim> shifted(std::array<int, kMaxDim> idx, int axis, int by) {
    idx[static_cast<std::size_t>(axis)] += by;
    return idx;
}

// Scalar Hessian entries at one (typically ring) cell, mirroring the kernel
// expression order exactly.
void hessian_at_cell(const ScalarField& u, const GhostView& gv, const std::array<int, kMaxDim>& idx,
                     double out[6]) {
    const Grid& g = u.grid;
    const double ih2 = 1.0 / (g.h * g.h);
    const double i4h2 = 1.0 / (4.0 * g.h * g.h);
    const double u0 = ghosted(u, gv, idx);
    int p = 0;
    for (int d = 0; d < g.dim; ++d) {
        double um = ghosted(u, gv, shifted(idx, d, -1));
        double up = ghosted(u, gv, shifted(idx, d, +1));
        out[p++] = ih2 * ((um + up) - 2.0 * u0);
    }
    for (int d = 0; d < g.dim; ++d)
        for (int e = d + 1; e < g.dim; ++e) {
            double app = ghosted(u, gv, shifted(shifted(idx, d, +1), e, +1));
            double amm = ghosted(u, gv, shifted(shifted(idx, d, -1), e, -1));
            double apm = ghosted(u, gv, shifted(shifted(idx, d, +1), e, -1));
            double amp = ghosted(u, gv, shifted(shifted(idx, d, -1), e, +1));
            out[p++] = i4h2 * ((app + amm) - (apm + amp));
        }
}

void gradient_at_cell(const ScalarField& u, const GhostView& gv, const std::array<int, kMaxDim>& idx,
                      double out[kMaxDim]) {
    const Grid& g = u.grid;
    const double i2h = 1.0 / (2.0 * g.h);
    for (int d = 0; d < g.dim; ++d) {
        double um = ghosted(u, gv, shifted(idx, d, -1));
        double up = ghosted(u, gv, shifted(idx, d, +1));
        out[d] = i2h * (up - um);
    }
}

double angle_of_entries(int dim, const double h6[6]) {
    namespace pm = kernels::pointmath;
    if (dim == 1) return __builtin_atan(h6[0]);
    if (dim == 2) return pm::angle2_point(h6[0], h6[1], h6[2]);
    return pm::angle3_point(h6[0], h6[1], h6[2], h6[3], h6[4], h6[5]);
}

// Shared residual assembly: interior via the kernel pipeline, ring cells via
// the scalar path with ghost reads (identical expression order).
enum class ResidualKind { expander, shrinker, translator };

ScalarField residual_impl(const ScalarField& v, const GhostView& gv, ResidualKind kind,
                          const std::array<double, kMaxDim>& a, const std::array<double, kMaxDim>& b,
                          double c) {
    const Grid& g = v.grid;
    if (!gv.available())
        throw usage_error("residual operators require a ghost closure at the boundary shell");
    ScalarField res(g);

    std::vector<double> lin;
    detail::InteriorEval ie(g, kind == ResidualKind::expander   ? detail::RhsMode::expander
                               : kind == ResidualKind::shrinker ? detail::RhsMode::shrinker
                                                                : detail::RhsMode::translator);
    if (kind == ResidualKind::translator) {
        lin.resize(g.num_points());
        std::array<int, kMaxDim> idx{};
        std::array<double, kMaxDim> x{};
        for (std::size_t f = 0; f < lin.size(); ++f) {
            g.unflatten(f, idx);
            g.coords_of(idx, x);
            double bx = 0.0;
            for (int d = 0; d < g.dim; ++d) bx += b[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
            lin[f] = bx + c;
        }
        ie.avec = a;
        ie.lin = lin.data();
    }
    ie.eval(v.data(), res.data(), 1, 0);

    const double vs = kind == ResidualKind::shrinker ? 1.0 : -1.0;
    const double ds = kind == ResidualKind::expander ? 0.5 : kind == ResidualKind::shrinker ? -0.5 : 1.0;
    detail::for_each_ring_cell(g, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        double h6[6];
        double gr[kMaxDim];
        hessian_at_cell(v, gv, idx, h6);
        gradient_at_cell(v, gv, idx, gr);
        double ang = angle_of_entries(g.dim, h6);
        double drift = 0.0;
        if (kind == ResidualKind::translator) {
            for (int d = 0; d < g.dim; ++d) drift += a[static_cast<std::size_t>(d)] * gr[d];
            res.v[f] = (ang + vs * lin[f]) + ds * drift;
        } else {
            for (int d = 0; d < g.dim; ++d) drift += g.coord(idx[static_cast<std::size_t>(d)]) * gr[d];
            res.v[f] = (ang + vs * v.at(f)) + ds * drift;
        }
    });
    return res;
}

void fill_hessian_interior(const ScalarField& u, HessianField& H) {
    namespace kn = lagflow::kernels;
    const Grid& g = u.grid;
    const std::size_t L = static_cast<std::size_t>(g.m - 2);
    const double ih2 = 1.0 / (g.h * g.h);
    const double i4h2 = 1.0 / (4.0 * g.h * g.h);
    const std::ptrdiff_t s0 = g.stride(0);
    const std::ptrdiff_t s1 = g.dim >= 2 ? g.stride(1) : 0;
    const long nrows = detail::interior_row_count(g);
    for (long r = 0; r < nrows; ++r) {
        int i0, i1;
        const std::size_t base = detail::interior_row_base(g, r, i0, i1);
        const double* ub = u.data() + base;
        if (g.dim == 1) {
            kn::second_diff(H.plane(0) + base, ub, 1, ih2, L);
        } else if (g.dim == 2) {
            kn::second_diff(H.plane(0) + base, ub, s0, ih2, L);
            kn::second_diff(H.plane(1) + base, ub, 1, ih2, L);
            kn::cross_diff(H.plane(2) + base, ub, s0, 1, i4h2, L);
        } else {
            kn::second_diff(H.plane(0) + base, ub, s0, ih2, L);
            kn::second_diff(H.plane(1) + base, ub, s1, ih2, L);
            kn::second_diff(H.plane(2) + base, ub, 1, ih2, L);
            kn::cross_diff(H.plane(3) + base, ub, s0, s1, i4h2, L);
            kn::cross_diff(H.plane(4) + base, ub, s0, 1, i4h2, L);
            kn::cross_diff(H.plane(5) + base, ub, s1, 1, i4h2, L);
        }
    }
}

} // namespace

HessianField hessian(const ScalarField& u, const GhostView& gv) {
    const Grid& g = u.grid;
    HessianField H(g);
    fill_hessian_interior(u, H);
    detail::for_each_ring_cell(g, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        double h6[6];
        hessian_at_cell(u, gv, idx, h6);
        for (int p = 0; p < H.nplanes; ++p) H.plane(p)[f] = h6[p];
    });
    return H;
}

HessianField hessian_interior(const ScalarField& u) {
    HessianField H(u.grid);
    fill_hessian_interior(u, H);
    return H;
}

VectorField gradient(const ScalarField& u, const GhostView& gv) {
    namespace kn = lagflow::kernels;
    const Grid& g = u.grid;
    VectorField G(g);
    const std::size_t L = static_cast<std::size_t>(g.m - 2);
    const double i2h = 1.0 / (2.0 * g.h);
    const std::ptrdiff_t s0 = g.stride(0);
    const std::ptrdiff_t s1 = g.dim >= 2 ? g.stride(1) : 0;
    const long nrows = detail::interior_row_count(g);
    for (long r = 0; r < nrows; ++r) {
        int i0, i1;
        const std::size_t base = detail::interior_row_base(g, r, i0, i1);
        const double* ub = u.data() + base;
        if (g.dim == 1) {
            kn::centered_diff(G.plane(0) + base, ub, 1, i2h, L);
        } else if (g.dim == 2) {
            kn::centered_diff(G.plane(0) + base, ub, s0, i2h, L);
            kn::centered_diff(G.plane(1) + base, ub, 1, i2h, L);
        } else {
            kn::centered_diff(G.plane(0) + base, ub, s0, i2h, L);
            kn::centered_diff(G.plane(1) + base, ub, s1, i2h, L);
            kn::centered_diff(G.plane(2) + base, ub, 1, i2h, L);
        }
    }
    detail::for_each_ring_cell(g, [&](std::size_t f, const std::array<int, kMaxDim>& idx) {
        double gr[kMaxDim];
        gradient_at_cell(u, gv, idx, gr);
        for (int d = 0; d < g.dim; ++d) G.plane(d)[f] = gr[d];
    });
    return G;
}

ScalarField angle_field(const HessianField& H) {
    namespace kn = lagflow::kernels;
    ScalarField out(H.grid);
    const std::size_t N = H.grid.num_points();
    if (H.grid.dim == 1) {
        kn::angle_dim1(out.data(), H.plane(0), N);
    } else if (H.grid.dim == 2) {
        kn::angle_dim2(out.data(), H.plane(0), H.plane(1), H.plane(2), N);
    } else {
        const double* planes[6] = {H.plane(0), H.plane(1), H.plane(2),
                                   H.plane(3), H.plane(4), H.plane(5)};
        kn::angle_dim3(out.data(), planes, N);
    }
    return out;
}

ScalarField expander_residual(const ScalarField& v, const GhostView& gv) {
    return residual_impl(v, gv, ResidualKind::expander, {}, {}, 0.0);
}

ScalarField shrinker_residual(const ScalarField& v, const GhostView& gv) {
    return residual_impl(v, gv, ResidualKind::shrinker, {}, {}, 0.0);
}

ScalarField translator_residual(const ScalarField& u0, const std::array<double, kMaxDim>& a,
                                const std::array<double, kMaxDim>& b, double c,
                                const GhostView& gv) {
    return residual_impl(u0, gv, ResidualKind::translator, a, b, c);
}

double sup_abs_interior(const ScalarField& f, int margin) {
    namespace kn = lagflow::kernels;
    const Grid& g = f.grid;
    if (margin < 0 || 2 * margin >= g.m)
        throw usage_error("sup_abs_interior: margin out of range for this grid");
    if (margin == 0) return kn::sup_abs(f.data(), f.size());
    const std::size_t seg = static_cast<std::size_t>(g.m - 2 * margin);
    double sup = 0.0;
    auto consider = [&](std::size_t base) {
        double s = kn::sup_abs(f.data() + base, seg);
        if (s > sup) sup = s;
    };
    if (g.dim == 1) {
        consider(static_cast<std::size_t>(margin));
    } else if (g.dim == 2) {
        for (int i0 = margin; i0 <= g.m - 1 - margin; ++i0)
            consider(static_cast<std::size_t>(i0) * static_cast<std::size_t>(g.m) + static_cast<std::size_t>(margin));
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

} // namespace lagflow
