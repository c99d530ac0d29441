#include "lagflow/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace lagflow {

namespace {

// Cyclic Jacobi on a dense copy; returns diagonal ascending.
std::vector<double> jacobi_eigenvalues(const SymMatrix& A) {
    const int n = A.n;
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = A.at(i, j);
    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double v = m[static_cast<std::size_t>(i) * n + j];
                s += 2.0 * v * v;
            }
        return std::sqrt(s);
    };
    const double tol = 1e-13 * std::max(A.frobenius_norm(), 1e-300);
    for (int sweep = 0; sweep < 30; ++sweep) {
        if (off_norm() <= tol) break;
        if (sweep == 29) throw numerical_error("sym_eigenvalues: Jacobi did not converge in 30 sweeps");
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = m[static_cast<std::size_t>(p) * n + q];
                if (apq == 0.0) continue;
                double app = m[static_cast<std::size_t>(p) * n + p];
                double aqq = m[static_cast<std::size_t>(q) * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = m[static_cast<std::size_t>(k) * n + p];
                    double akq = m[static_cast<std::size_t>(k) * n + q];
                    m[static_cast<std::size_t>(k) * n + p] = c * akp - s * akq;
                    m[static_cast<std::size_t>(k) * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = m[static_cast<std::size_t>(p) * n + k];
                    double aqk = m[static_cast<std::size_t>(q) * n + k];
                    m[static_cast<std::size_t>(p) * n + k] = c * apk - s * aqk;
                    m[static_cast<std::size_t>(q) * n + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i) * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace

std::vector<double> sym_eigenvalues(const SymMatrix& A) {
    switch (A.n) {
    case 1:
        return {A.at(0, 0)};
    case 2: {
        double lo, hi;
        eig2_closed(A.at(0, 0), A.at(1, 1), A.at(0, 1), lo, hi);
        return {lo, hi};
    }
    case 3: {
        double e0, e1, e2;
        eig3_closed(A.at(0, 0), A.at(1, 1), A.at(2, 2), A.at(0, 1), A.at(0, 2), A.at(1, 2),
                    e0, e1, e2);
        return {e0, e1, e2};
    }
    default:
        return jacobi_eigenvalues(A);
    }
}

double spectral_radius(const SymMatrix& A) {
    double r = 0.0;
    for (double e : sym_eigenvalues(A)) r = std::max(r, std::fabs(e));
    return r;
}

double lagrangian_angle(const SymMatrix& A) {
    double s = 0.0;
    for (double e : sym_eigenvalues(A)) s += std::atan(e);
    return s;
}

double angle_via_complex_det(const SymMatrix& A) {
    if (A.n > 4)
        throw usage_error("angle_via_complex_det: principal-branch guarantee requires dim <= 4");
    if (spectral_radius(A) >= 1.0)
        throw usage_error("angle_via_complex_det: requires spectral radius < 1 (branch ambiguity)");
    const int n = A.n;
    using cd = std::complex<double>;
    std::vector<cd> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(i) * n + j] = cd(i == j ? 1.0 : 0.0, A.at(i, j));
    // LU with partial pivoting; det = prod of pivots * (-1)^swaps.
    cd det(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(m[static_cast<std::size_t>(i) * n + k]);
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) throw numerical_error("angle_via_complex_det: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(m[static_cast<std::size_t>(piv) * n + j], m[static_cast<std::size_t>(k) * n + j]);
            det = -det;
        }
        det *= m[static_cast<std::size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            cd f = m[static_cast<std::size_t>(i) * n + k] / m[static_cast<std::size_t>(k) * n + k];
            for (int j = k; j < n; ++j)
                m[static_cast<std::size_t>(i) * n + j] -= f * m[static_cast<std::size_t>(k) * n + j];
        }
    }
    return std::arg(det);
}

SymMatrix linearization(const SymMatrix& A) {
    const int n = A.n;
    // M0 = I + A^2 (symmetric positive definite).
    SymMatrix m0(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = (i == j) ? 1.0 : 0.0;
            for (int k = 0; k < n; ++k) s += A.at(i, k) * A.at(k, j);
            m0.at(i, j) = s;
        }
    // Cholesky M0 = L L^T.
    std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m0.at(i, j);
            for (int k = 0; k < j; ++k)
                s -= L[static_cast<std::size_t>(i) * n + k] * L[static_cast<std::size_t>(j) * n + k];
            if (i == j) {
                if (s <= 0.0) throw numerical_error("linearization: Cholesky failed (not SPD)");
                L[static_cast<std::size_t>(i) * n + j] = std::sqrt(s);
            } else {
                L[static_cast<std::size_t>(i) * n + j] = s / L[static_cast<std::size_t>(j) * n + j];
            }
        }
    }
    // Solve M0 X = I column by column.
    SymMatrix inv(n);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= L[static_cast<std::size_t>(i) * n + k] * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s / L[static_cast<std::size_t>(i) * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < n; ++k) s -= L[static_cast<std::size_t>(k) * n + i] * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s / L[static_cast<std::size_t>(i) * n + i];
        }
        for (int i = col; i < n; ++i) inv.at(col, i) = y[static_cast<std::size_t>(i)];
    }
    return inv;
}

double directional_derivative(const SymMatrix& M, const SymMatrix& B) {
    if (M.n != B.n) throw usage_error("directional_derivative: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j) s += M.at(i, j) * B.at(i, j);
    return s;
}

} // namespace lagflow
