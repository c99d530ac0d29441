#include "interior_ops.hpp"

#include <algorithm>

#include "lagflow/kernels.hpp"
#include "lagflow/parallel.hpp"

namespace lagflow::detail {

InteriorEval::InteriorEval(const Grid& g, RhsMode m) : grid(g), mode(m) {
    axis_coord.resize(static_cast<std::size_t>(g.m));
    for (int i = 0; i < g.m; ++i) axis_coord[static_cast<std::size_t>(i)] = g.coord(i);
}

double InteriorEval::eval(const double* u, double* out, int workers, int margin) const {
    namespace kn = lagflow::kernels;
    const Grid& g = grid;
    const int dim = g.dim;
    const std::size_t L = static_cast<std::size_t>(g.m - 2);
    const double ih2 = 1.0 / (g.h * g.h);
    const double i4h2 = 1.0 / (4.0 * g.h * g.h);
    const double i2h = 1.0 / (2.0 * g.h);
    const long nrows = interior_row_count(g);
    const bool needs_grad = mode != RhsMode::angle_only;
    const std::ptrdiff_t s0 = g.stride(0);
    const std::ptrdiff_t s1 = dim >= 2 ? g.stride(1) : 0;

    int nworkers = workers < 1 ? 1 : workers;
    std::vector<double> worker_sup(static_cast<std::size_t>(nworkers), 0.0);

    parallel_for_blocks(nrows, nworkers, [&](long w, long rb, long re) {
        // Per-worker scratch rows.
        std::vector<double> hxx(L), hyy, hzz, hxy, hxz, hyz, ang, gx, gy, gz, acc;
        if (dim >= 2) {
            hyy.resize(L);
            hxy.resize(L);
        }
        if (dim >= 3) {
            hzz.resize(L);
            hxz.resize(L);
            hyz.resize(L);
        }
        if (mode != RhsMode::angle_only) ang.resize(L);
        if (needs_grad) {
            gx.resize(L);
            acc.resize(L);
            if (dim >= 2) gy.resize(L);
            if (dim >= 3) gz.resize(L);
        }
        for (long r = rb; r < re; ++r) {
            int i0, i1;
            const std::size_t base = interior_row_base(g, r, i0, i1);
            const double* ub = u + base;
            double* ob = out + base;
            double* angdst = mode == RhsMode::angle_only ? ob : ang.data();

            // Hessian rows (inner axis is the last one; its stride is 1).
            if (dim == 1) {
                kn::second_diff(hxx.data(), ub, 1, ih2, L);
                kn::angle_dim1(angdst, hxx.data(), L);
            } else if (dim == 2) {
                kn::second_diff(hxx.data(), ub, s0, ih2, L);
                kn::second_diff(hyy.data(), ub, 1, ih2, L);
                kn::cross_diff(hxy.data(), ub, s0, 1, i4h2, L);
                kn::angle_dim2(angdst, hxx.data(), hyy.data(), hxy.data(), L);
            } else {
                kn::second_diff(hxx.data(), ub, s0, ih2, L);
                kn::second_diff(hyy.data(), ub, s1, ih2, L);
                kn::second_diff(hzz.data(), ub, 1, ih2, L);
                kn::cross_diff(hxy.data(), ub, s0, s1, i4h2, L);
                kn::cross_diff(hxz.data(), ub, s0, 1, i4h2, L);
                kn::cross_diff(hyz.data(), ub, s1, 1, i4h2, L);
                const double* planes[6] = {hxx.data(), hyy.data(), hzz.data(),
                                           hxy.data(), hxz.data(), hyz.data()};
                kn::angle_dim3(angdst, planes, L);
            }

            if (needs_grad) {
                std::fill(acc.begin(), acc.end(), 0.0);
                if (dim == 1) {
                    kn::centered_diff(gx.data(), ub, 1, i2h, L);
                } else if (dim == 2) {
                    kn::centered_diff(gx.data(), ub, s0, i2h, L);
                    kn::centered_diff(gy.data(), ub, 1, i2h, L);
                } else {
                    kn::centered_diff(gx.data(), ub, s0, i2h, L);
                    kn::centered_diff(gy.data(), ub, s1, i2h, L);
                    kn::centered_diff(gz.data(), ub, 1, i2h, L);
                }
                if (mode == RhsMode::translator) {
                    kn::axpy(acc.data(), avec[0], gx.data(), L);
                    if (dim >= 2) kn::axpy(acc.data(), avec[1], gy.data(), L);
                    if (dim >= 3) kn::axpy(acc.data(), avec[2], gz.data(), L);
                    // out = ang - (b.x + c) + a.grad
                    kn::soliton_rhs(ob, ang.data(), lin + base, acc.data(), -1.0, 1.0, L);
                } else {
                    // drift = x . grad, inner axis via the coordinate array
                    if (dim == 1) {
                        kn::weighted_add(acc.data(), axis_coord.data() + 1, gx.data(), L);
                    } else if (dim == 2) {
                        kn::axpy(acc.data(), axis_coord[static_cast<std::size_t>(i0)], gx.data(), L);
                        kn::weighted_add(acc.data(), axis_coord.data() + 1, gy.data(), L);
                    } else {
                        kn::axpy(acc.data(), axis_coord[static_cast<std::size_t>(i0)], gx.data(), L);
                        kn::axpy(acc.data(), axis_coord[static_cast<std::size_t>(i1)], gy.data(), L);
                        kn::weighted_add(acc.data(), axis_coord.data() + 1, gz.data(), L);
                    }
                    if (mode == RhsMode::expander)
                        kn::soliton_rhs(ob, ang.data(), ub, acc.data(), -1.0, 0.5, L);
                    else
                        kn::soliton_rhs(ob, ang.data(), ub, acc.data(), 1.0, -0.5, L);
                }
            }

            // Margin sup over this row's margin-interior segment (margin 0 = no sup).
            bool outer_ok = margin >= 1;
            if (outer_ok && dim >= 2) outer_ok = i0 >= margin && i0 <= g.m - 1 - margin;
            if (dim >= 3) outer_ok = outer_ok && i1 >= margin && i1 <= g.m - 1 - margin;
            if (outer_ok) {
                const std::size_t seg = static_cast<std::size_t>(g.m - 2 * margin);
                double s = kn::sup_abs(ob + (margin - 1), seg);
                if (s > worker_sup[static_cast<std::size_t>(w)]) worker_sup[static_cast<std::size_t>(w)] = s;
            }
        }
    });

    double sup = 0.0;
    for (double s : worker_sup)
        if (s > sup) sup = s;
    return sup;
}

} // namespace lagflow::detail
