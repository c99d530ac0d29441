#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lagflow/errors.hpp"

namespace lagflow {

// Small dense symmetric matrix (dimension 1..8), upper triangle stored
// row-major: a11 a12 .. a1n a22 a23 .. ann.
struct SymMatrix {
    int n = 0;
    std::vector<double> a; // size n*(n+1)/2

    SymMatrix() = default;
    explicit SymMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0) {
        if (dim < 1 || dim > 8) throw usage_error("SymMatrix: dimension must be in 1..8");
    }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static SymMatrix diag(const std::vector<double>& d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    int dim() const { return n; }
    std::size_t packed_size() const { return a.size(); }

    // Upper-triangle offset for i <= j.
    std::size_t offset(int i, int j) const {
        return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 +
               static_cast<std::size_t>(j - i);
    }
    double& at(int i, int j) {
        if (i > j) { int t = i; i = j; j = t; }
        return a[offset(i, j)];
    }
    double at(int i, int j) const {
        if (i > j) { int t = i; i = j; j = t; }
        return a[offset(i, j)];
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += at(i, i);
        return t;
    }
    double frobenius_norm() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(s);
    }
};

// Closed-form eigenvalues of [[axx, axy], [axy, ayy]], ascending. The exact
// expression order here is the reproducibility contract shared with the SIMD
// kernels: mean +/- sqrt(((axx-ayy)/2)^2 + axy^2).
inline void eig2_closed(double axx, double ayy, double axy, double& lo, double& hi) {
    double mean = (axx + ayy) * 0.5;
    double d = (axx - ayy) * 0.5;
    double r = std::sqrt(d * d + axy * axy);
    lo = mean - r;
    hi = mean + r;
}

// Closed-form eigenvalues of a symmetric 3x3 via the trigonometric solution of
// the characteristic cubic, ascending. Formula order is shared with the SIMD
// kernels (bitwise contract).
inline void eig3_closed(double axx, double ayy, double azz, double axy, double axz, double ayz,
                        double& e0, double& e1, double& e2) {
    double q = (axx + ayy + azz) / 3.0;
    double bxx = axx - q, byy = ayy - q, bzz = azz - q;
    double p2 = bxx * bxx + byy * byy + bzz * bzz + 2.0 * (axy * axy + axz * axz + ayz * ayz);
    double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) { // exactly scalar matrix
        e0 = e1 = e2 = q;
        return;
    }
    double inv = 1.0 / p;
    double cxx = bxx * inv, cyy = byy * inv, czz = bzz * inv;
    double cxy = axy * inv, cxz = axz * inv, cyz = ayz * inv;
    double det = cxx * (cyy * czz - cyz * cyz) - cxy * (cxy * czz - cyz * cxz) +
                 cxz * (cxy * cyz - cyy * cxz);
    double r = det * 0.5;
    if (r < -1.0) r = -1.0;
    if (r > 1.0) r = 1.0;
    double phi = std::acos(r) / 3.0;
    double two_pi_3 = 2.0943951023931953; // 2*pi/3
    e2 = q + 2.0 * p * std::cos(phi);            // largest (cos in [1/2, 1])
    e0 = q + 2.0 * p * std::cos(phi + two_pi_3); // smallest (cos in [-1, -1/2])
    e1 = 3.0 * q - e0 - e2;                      // middle, via the trace identity
    if (e1 < e0) { double t = e0; e0 = e1; e1 = t; } // roundoff guard near degeneracy
    if (e2 < e1) { double t = e1; e1 = e2; e2 = t; }
}

// Eigenvalues of A, ascending. n<=3 use closed forms; n>=4 uses cyclic Jacobi
// sweeps until the off-diagonal Frobenius mass is <= 1e-13 * ||A||_F
// (at most 30 sweeps, else numerical_error).
std::vector<double> sym_eigenvalues(const SymMatrix& A);

// Largest |eigenvalue|.
double spectral_radius(const SymMatrix& A);

// Sum of arctangents of the eigenvalues of A. This is the quantity the whole
// laboratory revolves around: for a gradient graph with Hessian A it is the
// Lagrangian angle, and |angle(A)| <= dim * arctan(max |eig|) by construction.
double lagrangian_angle(const SymMatrix& A);

// Independent route for cross-checking: arg det(I + iA), which equals the
// arctan sum whenever the argument stays on the principal branch.
// Preconditions: dim <= 4 and spectral_radius(A) < 1 (keeps |angle| < pi).
double angle_via_complex_det(const SymMatrix& A);

// Linearization coefficient matrix M = (I + A^2)^{-1} (symmetric positive
// definite). The derivative of the angle at A in direction B is trace(M B).
SymMatrix linearization(const SymMatrix& A);

// trace(M B) = sum_{ij} M_ij B_ij for symmetric M, B.
double directional_derivative(const SymMatrix& M, const SymMatrix& B);

} // namespace lagflow
