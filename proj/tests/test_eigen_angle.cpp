// Eigenvalue and Lagrangian-angle operator tests. Oracles: hand-computable
// block matrices, a bisection root-finder on the characteristic polynomial,
// long-double arctan sums for diagonal matrices, and the independent
// arg det(I + iA) route.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "lagflow/sym_matrix.hpp"

using namespace lagflow;

namespace {

// det(A - x I) for a 3x3 symmetric matrix, evaluated directly.
double charpoly3(const SymMatrix& A, double x) {
    double a = A.at(0, 0) - x, b = A.at(1, 1) - x, c = A.at(2, 2) - x;
    double d = A.at(0, 1), e = A.at(0, 2), f = A.at(1, 2);
    return a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
}

// Bisection for a sign change of the characteristic polynomial in [lo, hi].
double bisect_eig3(const SymMatrix& A, double lo, double hi) {
    double flo = charpoly3(A, lo);
    REQUIRE(flo * charpoly3(A, hi) <= 0.0);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = charpoly3(A, mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

SymMatrix random_sym(std::mt19937& rng, int dim, double radius_cap) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SymMatrix A(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) A.at(i, j) = d(rng);
    double rho = spectral_radius(A);
    if (rho > radius_cap)
        for (double& v : A.a) v *= radius_cap / rho;
    return A;
}

// A = Q D Q^T from Givens rotations (dim 3), so the spectrum is known by
// construction up to the roundoff of assembling A.
SymMatrix rotated_diag3(double d0, double d1, double d2, double t01, double t02, double t12) {
    double Q[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    auto rot = [&](int p, int q, double th) {
        double c = std::cos(th), s = std::sin(th);
        for (int r = 0; r < 3; ++r) {
            double a = Q[r][p], b = Q[r][q];
            Q[r][p] = c * a - s * b;
            Q[r][q] = s * a + c * b;
        }
    };
    rot(0, 1, t01);
    rot(0, 2, t02);
    rot(1, 2, t12);
    double D[3] = {d0, d1, d2};
    SymMatrix A(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += Q[i][k] * D[k] * Q[j][k];
            A.at(i, j) = s;
        }
    return A;
}

} // namespace

TEST_CASE("eig2_closed on hand matrices") {
    double lo = 0.0, hi = 0.0;
    eig2_closed(2.0, 2.0, 1.0, lo, hi); // [[2,1],[1,2]]: eigs 1, 3
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-15));

    eig2_closed(0.7, -0.2, 0.0, lo, hi); // diagonal
    CHECK(lo == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(hi == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("eig3_closed on a block matrix") {
    // [[0.2,0.1,0],[0.1,0.2,0],[0,0,0.5]] has eigenvalues 0.1, 0.3, 0.5.
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    eig3_closed(0.2, 0.2, 0.5, 0.1, 0.0, 0.0, e0, e1, e2);
    CHECK(std::fabs(e0 - 0.1) <= 1e-13);
    CHECK(std::fabs(e1 - 0.3) <= 1e-13);
    CHECK(std::fabs(e2 - 0.5) <= 1e-13);
}

TEST_CASE("eig3_closed degenerate spectra") {
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    eig3_closed(0.3, 0.3, 0.3, 0.0, 0.0, 0.0, e0, e1, e2); // exactly scalar
    CHECK(e0 == 0.3);
    CHECK(e1 == 0.3);
    CHECK(e2 == 0.3);

    eig3_closed(0.3, 0.3 + 1e-14, 0.3 - 1e-14, 0.0, 0.0, 0.0, e0, e1, e2);
    CHECK(e0 <= e1);
    CHECK(e1 <= e2); // ascending even under roundoff near degeneracy
}

TEST_CASE("sym_eigenvalues vs bisection on the characteristic polynomial") {
    SymMatrix A(3);
    A.at(0, 0) = 0.31;
    A.at(1, 1) = -0.12;
    A.at(2, 2) = 0.47;
    A.at(0, 1) = 0.21;
    A.at(0, 2) = -0.33;
    A.at(1, 2) = 0.08;
    std::vector<double> eig = sym_eigenvalues(A);
    REQUIRE(eig.size() == 3);
    // Bracket each root between the sorted eigenvalue guesses widened by a
    // fixed gap; the oracle only trusts sign changes of det(A - xI).
    double brackets[4] = {-2.0, 0.5 * (eig[0] + eig[1]), 0.5 * (eig[1] + eig[2]), 2.0};
    for (int k = 0; k < 3; ++k) {
        double root = bisect_eig3(A, brackets[k], brackets[k + 1]);
        CHECK(std::fabs(eig[static_cast<std::size_t>(k)] - root) <= 1e-12);
    }
}

TEST_CASE("orthogonal invariance of the spectrum") {
    const double d0 = -0.6, d1 = 0.1, d2 = 0.8;
    SymMatrix A = rotated_diag3(d0, d1, d2, 0.3, 0.7, 1.1);
    std::vector<double> eig = sym_eigenvalues(A);
    REQUIRE(eig.size() == 3);
    CHECK(std::fabs(eig[0] - d0) <= 1e-12);
    CHECK(std::fabs(eig[1] - d1) <= 1e-12);
    CHECK(std::fabs(eig[2] - d2) <= 1e-12);
    // The angle is a spectral function: rotating the matrix leaves it fixed.
    long double want = std::atan((long double)d0) + std::atan((long double)d1) +
                       std::atan((long double)d2);
    CHECK(std::fabs(lagrangian_angle(A) - (double)want) <= 1e-12);
}

TEST_CASE("angle on diagonal matrices vs long-double arctan sums") {
    const std::vector<std::vector<double>> cases = {
        {0.5}, {0.5, 0.3}, {-0.9, 0.9}, {0.5, 0.3, -0.2}, {1e-8, -1e-8, 0.7}};
    for (const auto& d : cases) {
        long double want = 0.0L;
        for (double v : d) want += std::atan((long double)v);
        CHECK(std::fabs(lagrangian_angle(SymMatrix::diag(d)) - (double)want) <= 1e-14);
    }
    // dim 1 is a bare arctan
    SymMatrix one(1);
    one.at(0, 0) = 0.25;
    CHECK(lagrangian_angle(one) == std::atan(0.25));
}

TEST_CASE("angle oddness and eigenvalue monotonicity") {
    std::mt19937 rng(2024u);
    for (int trial = 0; trial < 50; ++trial) {
        for (int dim = 1; dim <= 3; ++dim) {
            SymMatrix A = random_sym(rng, dim, 0.9);
            SymMatrix negA = A;
            for (double& v : negA.a) v = -v;
            CHECK(std::fabs(lagrangian_angle(A) + lagrangian_angle(negA)) <= 1e-13);
        }
    }
    // arctan-sum monotone in each diagonal entry of a diagonal matrix
    double prev = lagrangian_angle(SymMatrix::diag({-0.9, 0.2}));
    for (double a : {-0.5, 0.0, 0.4, 0.9}) {
        double cur = lagrangian_angle(SymMatrix::diag({a, 0.2}));
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("angle bound via spectral radius") {
    std::mt19937 rng(7u);
    for (int trial = 0; trial < 100; ++trial) {
        SymMatrix A = random_sym(rng, 3, 0.95);
        double rho = spectral_radius(A);
        CHECK(std::fabs(lagrangian_angle(A)) <= 3.0 * std::atan(rho) + 1e-12);
    }
}

TEST_CASE("angle agrees with arg det(I + iA)") {
    std::mt19937 rng(123u);
    for (int dim = 1; dim <= 4; ++dim) {
        for (int trial = 0; trial < 100; ++trial) {
            SymMatrix A = random_sym(rng, dim, 0.9);
            CHECK(std::fabs(lagrangian_angle(A) - angle_via_complex_det(A)) <= 1e-12);
        }
    }
    // precondition: spectral radius < 1
    CHECK_THROWS_AS((void)angle_via_complex_det(SymMatrix::diag({1.2, 0.0})), usage_error);
}

TEST_CASE("linearization is the inverse of I + A^2") {
    SymMatrix A(3);
    A.at(0, 0) = 0.4;
    A.at(1, 1) = -0.3;
    A.at(2, 2) = 0.1;
    A.at(0, 1) = 0.2;
    A.at(1, 2) = -0.15;
    SymMatrix M = linearization(A);
    // form I + A^2 and multiply
    double B[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = i == j ? 1.0 : 0.0;
            for (int k = 0; k < 3; ++k) s += A.at(i, k) * A.at(k, j);
            B[i][j] = s;
        }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += M.at(i, k) * B[k][j];
            CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) <= 1e-13);
        }
}

TEST_CASE("directional derivative vs central differences") {
    std::mt19937 rng(99u);
    const double eps = 1e-5;
    for (int dim = 2; dim <= 3; ++dim) {
        for (int trial = 0; trial < 25; ++trial) {
            SymMatrix A = random_sym(rng, dim, 0.8);
            SymMatrix B = random_sym(rng, dim, 1.0);
            SymMatrix Ap = A, Am = A;
            for (std::size_t k = 0; k < A.a.size(); ++k) {
                Ap.a[k] += eps * B.a[k];
                Am.a[k] -= eps * B.a[k];
            }
            double fd = (lagrangian_angle(Ap) - lagrangian_angle(Am)) / (2.0 * eps);
            double tr = directional_derivative(linearization(A), B);
            CHECK(std::fabs(fd - tr) <= 1e-8);
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(SymMatrix(0), usage_error);
    CHECK_THROWS_AS(SymMatrix(9), usage_error);
    SymMatrix big(5);
    CHECK_THROWS_AS((void)angle_via_complex_det(big), usage_error); // dim > 4
}
