#pragma once

#include <cstddef>
#include <string>

#include "lagflow/errors.hpp"

// Flat array passes that dominate the run time, each available as a scalar
// reference implementation and (on x86-64) an AVX2 variant selected at
// runtime. The two variants are BITWISE identical by construction: same
// expression trees, no FMA, correctly-rounded sqrt, transcendentals evaluated
// per lane by libm. The build sets -ffp-contract=off so the compiler cannot
// fuse either path. The equivalence test suite asserts exact equality.
namespace lagflow::kernels {

enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend detect_backend();          // avx2 when the CPU has it, else scalar
Backend active_backend();
void set_backend(Backend b);       // usage_error if unsupported on this CPU
const char* backend_name(Backend b);
Backend parse_backend(const std::string& name); // "auto" | "scalar" | "avx2"

// dst[i] = u[i] + a * k[i]
void combine(double* dst, const double* u, double a, const double* k, std::size_t n);

// dst[i] = c * ((up[i-s] + up[i+s]) - 2*up[i])          (second difference)
void second_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n);

// dst[i] = c * ((up[i+si+sj] + up[i-si-sj]) - (up[i+si-sj] + up[i-si+sj]))
void cross_diff(double* dst, const double* up, std::ptrdiff_t si, std::ptrdiff_t sj, double c,
                std::size_t n);

// dst[i] = c * (up[i+s] - up[i-s])                      (centered difference)
void centered_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n);

// ang[i] = sum of arctan of eigenvalues of the pointwise Hessian, per dim.
void angle_dim1(double* ang, const double* dxx, std::size_t n);
void angle_dim2(double* ang, const double* dxx, const double* dyy, const double* dxy,
                std::size_t n);
// h = {xx, yy, zz, xy, xz, yz}
void angle_dim3(double* ang, const double* const h[6], std::size_t n);

// dst[i] = ang[i] + vs * v[i] + ds * drift[i]           (soliton RHS assembly)
void soliton_rhs(double* dst, const double* ang, const double* v, const double* drift, double vs,
                 double ds, std::size_t n);

// acc[i] += w[i] * g[i]    (coordinate array along the inner axis)
void weighted_add(double* acc, const double* w, const double* g, std::size_t n);

// acc[i] += a * g[i]       (constant coordinate along an outer axis)
void axpy(double* acc, double a, const double* g, std::size_t n);

double sup_abs(const double* u, std::size_t n);
double sup_abs_diff(const double* a, const double* b, std::size_t n);
void minmax(const double* u, std::size_t n, double& lo, double& hi);
bool all_finite(const double* u, std::size_t n);

// Shared pointwise angle formulas (the bitwise contract between backends).
namespace pointmath {

inline double angle2_point(double dxx, double dyy, double dxy) {
    double mean = (dxx + dyy) * 0.5;
    double d = (dxx - dyy) * 0.5;
    double r = __builtin_sqrt(d * d + dxy * dxy);
    return __builtin_atan(mean - r) + __builtin_atan(mean + r);
}

inline double angle3_tail(double q, double p, double r) {
    // Per-lane tail of the trigonometric eigenvalue solve: r is already
    // clamped to [-1, 1].
    if (p == 0.0) return (__builtin_atan(q) + __builtin_atan(q)) + __builtin_atan(q);
    double phi = __builtin_acos(r) / 3.0;
    double two_pi_3 = 2.0943951023931953;
    double e2 = q + 2.0 * p * __builtin_cos(phi);            // largest
    double e0 = q + 2.0 * p * __builtin_cos(phi + two_pi_3); // smallest
    double e1 = 3.0 * q - e0 - e2;                           // middle
    return (__builtin_atan(e0) + __builtin_atan(e1)) + __builtin_atan(e2);
}

inline double angle3_point(double axx, double ayy, double azz, double axy, double axz,
                           double ayz) {
    double q = (axx + ayy + azz) / 3.0;
    double bxx = axx - q, byy = ayy - q, bzz = azz - q;
    double p2 = bxx * bxx + byy * byy + bzz * bzz + 2.0 * (axy * axy + axz * axz + ayz * ayz);
    double p = __builtin_sqrt(p2 / 6.0);
    double r = 0.0;
    if (p != 0.0) {
        double inv = 1.0 / p;
        double cxx = bxx * inv, cyy = byy * inv, czz = bzz * inv;
        double cxy = axy * inv, cxz = axz * inv, cyz = ayz * inv;
        double det = cxx * (cyy * czz - cyz * cyz) - cxy * (cxy * czz - cyz * cxz) +
                     cxz * (cxy * cyz - cyy * cxz);
        r = det * 0.5;
        if (r < -1.0) r = -1.0;
        if (r > 1.0) r = 1.0;
    }
    return angle3_tail(q, p, r);
}

} // namespace pointmath

} // namespace lagflow::kernels
