#include <cmath>

#include "lagflow/kernels.hpp"
#include "kernels_detail.hpp"

namespace lagflow::kernels::scalar_impl {

void combine(double* dst, const double* u, double a, const double* k, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = u[i] + a * k[i];
}

void second_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        dst[i] = c * ((up[p - s] + up[p + s]) - 2.0 * up[p]);
    }
}

void cross_diff(double* dst, const double* up, std::ptrdiff_t si, std::ptrdiff_t sj, double c,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        dst[i] = c * ((up[p + si + sj] + up[p - si - sj]) - (up[p + si - sj] + up[p - si + sj]));
    }
}

void centered_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        dst[i] = c * (up[p + s] - up[p - s]);
    }
}

void angle_dim1(double* ang, const double* dxx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) ang[i] = __builtin_atan(dxx[i]);
}

void angle_dim2(double* ang, const double* dxx, const double* dyy, const double* dxy,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) ang[i] = pointmath::angle2_point(dxx[i], dyy[i], dxy[i]);
}

void angle_dim3(double* ang, const double* const h[6], std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        ang[i] = pointmath::angle3_point(h[0][i], h[1][i], h[2][i], h[3][i], h[4][i], h[5][i]);
}

void soliton_rhs(double* dst, const double* ang, const double* v, const double* drift, double vs,
                 double ds, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = (ang[i] + vs * v[i]) + ds * drift[i];
}

void weighted_add(double* acc, const double* w, const double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += w[i] * g[i];
}

void axpy(double* acc, double a, const double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += a * g[i];
}

double sup_abs(const double* u, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::fabs(u[i]);
        if (v > s) s = v;
    }
    return s;
}

double sup_abs_diff(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::fabs(a[i] - b[i]);
        if (v > s) s = v;
    }
    return s;
}

void minmax(const double* u, std::size_t n, double& lo, double& hi) {
    double l = u[0], h = u[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (u[i] < l) l = u[i];
        if (u[i] > h) h = u[i];
    }
    lo = l;
    hi = h;
}

bool all_finite(const double* u, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(u[i])) return false;
    return true;
}

} // namespace lagflow::kernels::scalar_impl
