#include "lagflow/cone.hpp"

#include <algorithm>
#include <cmath>

namespace lagflow {

const ConeSector& ConeSpec::sector_at(const std::array<double, kMaxDim>& x) const {
    for (const ConeSector& s : sectors)
        if (s.matches(x, dim)) return s;
    throw usage_error("ConeSpec: coverage gap (no sector matches the query point)");
}

double ConeSpec::value(const std::array<double, kMaxDim>& x) const {
    const SymMatrix& A = sector_at(x).A;
    double q = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            q += x[static_cast<std::size_t>(i)] * A.at(i, j) * x[static_cast<std::size_t>(j)];
    return 0.5 * q;
}

const SymMatrix& ConeSpec::hessian_at(const std::array<double, kMaxDim>& x) const {
    return sector_at(x).A;
}

double ConeSpec::angle_at(const std::array<double, kMaxDim>& x) const {
    return sector_at(x).angle_value;
}

double ConeSpec::max_spectral_radius() const {
    double r = 0.0;
    for (const ConeSector& s : sectors) r = std::max(r, spectral_radius(s.A));
    return r;
}

double ConeSpec::max_abs_angle() const {
    double r = 0.0;
    for (const ConeSector& s : sectors) r = std::max(r, std::fabs(s.angle_value));
    return r;
}

ConeSpec ConeSpec::single(const SymMatrix& A) {
    ConeSpec c;
    c.dim = A.n;
    ConeSector s;
    s.sign = {0, 0, 0};
    s.A = A;
    s.angle_value = lagrangian_angle(A);
    c.sectors.push_back(std::move(s));
    return c;
}

ConeSpec ConeSpec::sign_flip(const std::vector<double>& a) {
    if (a.empty() || a.size() > kMaxDim)
        throw usage_error("ConeSpec::sign_flip: need 1..3 diagonal entries");
    ConeSpec c;
    c.dim = static_cast<int>(a.size());
    auto make = [&](int first_sign) {
        ConeSector s;
        s.sign = {first_sign, 0, 0};
        std::vector<double> d = a;
        d[0] *= first_sign;
        s.A = SymMatrix::diag(d);
        s.angle_value = lagrangian_angle(s.A);
        return s;
    };
    c.sectors.push_back(make(+1));
    c.sectors.push_back(make(-1));
    return c;
}

ScalarField sample_cone(const ConeSpec& cone, const Grid& grid) {
    if (cone.dim != grid.dim) throw usage_error("sample_cone: cone/grid dimension mismatch");
    ScalarField u(grid);
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    for (std::size_t f = 0; f < u.size(); ++f) {
        grid.unflatten(f, idx);
        grid.coords_of(idx, x);
        u.v[f] = cone.value(x);
    }
    return u;
}

double cone_pinching_margin(const ConeSpec& cone, double delta) {
    return (1.0 - delta) - cone.max_spectral_radius();
}

} // namespace lagflow
