// AVX2 variants of the hot kernels. Compiled with -mavx2 (no -mfma; the build
// also sets -ffp-contract=off), so every lane performs exactly the operations
// of the scalar reference in the same order: bitwise-identical results.
// Transcendentals are evaluated per lane by the same libm calls the scalar
// path uses; sqrt maps to VSQRTPD, which is correctly rounded like sqrt().

#ifdef LAGFLOW_HAVE_AVX2

#include <cmath>
#include <immintrin.h>

#include "lagflow/kernels.hpp"
#include "kernels_detail.hpp"

namespace lagflow::kernels::avx2_impl {

namespace {
inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }
} // namespace

void combine(double* dst, const double* u, double a, const double* k, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_add_pd(_mm256_loadu_pd(u + i),
                                  _mm256_mul_pd(va, _mm256_loadu_pd(k + i)));
        _mm256_storeu_pd(dst + i, r);
    }
    for (; i < n; ++i) dst[i] = u[i] + a * k[i];
}

void second_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        __m256d um = _mm256_loadu_pd(up + (p - s));
        __m256d u0 = _mm256_loadu_pd(up + p);
        __m256d uplus = _mm256_loadu_pd(up + (p + s));
        __m256d t = _mm256_sub_pd(_mm256_add_pd(um, uplus), _mm256_mul_pd(two, u0));
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(vc, t));
    }
    for (; i < n; ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        dst[i] = c * ((up[p - s] + up[p + s]) - 2.0 * up[p]);
    }
}

void cross_diff(double* dst, const double* up, std::ptrdiff_t si, std::ptrdiff_t sj, double c,
                std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        __m256d app = _mm256_loadu_pd(up + (p + si + sj));
        __m256d amm = _mm256_loadu_pd(up + (p - si - sj));
        __m256d apm = _mm256_loadu_pd(up + (p + si - sj));
        __m256d amp = _mm256_loadu_pd(up + (p - si + sj));
        __m256d t = _mm256_sub_pd(_mm256_add_pd(app, amm), _mm256_add_pd(apm, amp));
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(vc, t));
    }
    for (; i < n; ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        dst[i] = c * ((up[p + si + sj] + up[p - si - sj]) - (up[p + si - sj] + up[p - si + sj]));
    }
}

void centered_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        __m256d t = _mm256_sub_pd(_mm256_loadu_pd(up + (p + s)), _mm256_loadu_pd(up + (p - s)));
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(vc, t));
    }
    for (; i < n; ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i);
        dst[i] = c * (up[p + s] - up[p - s]);
    }
}

void angle_dim1(double* ang, const double* dxx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) ang[i] = __builtin_atan(dxx[i]);
}

void angle_dim2(double* ang, const double* dxx, const double* dyy, const double* dxy,
                std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xx = _mm256_loadu_pd(dxx + i);
        __m256d yy = _mm256_loadu_pd(dyy + i);
        __m256d xy = _mm256_loadu_pd(dxy + i);
        __m256d mean = _mm256_mul_pd(_mm256_add_pd(xx, yy), half);
        __m256d d = _mm256_mul_pd(_mm256_sub_pd(xx, yy), half);
        __m256d r =
            _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(d, d), _mm256_mul_pd(xy, xy)));
        double lo[4], hi[4];
        _mm256_storeu_pd(lo, _mm256_sub_pd(mean, r));
        _mm256_storeu_pd(hi, _mm256_add_pd(mean, r));
        for (int l = 0; l < 4; ++l) ang[i + static_cast<std::size_t>(l)] =
            __builtin_atan(lo[l]) + __builtin_atan(hi[l]);
    }
    for (; i < n; ++i) ang[i] = pointmath::angle2_point(dxx[i], dyy[i], dxy[i]);
}

void angle_dim3(double* ang, const double* const h[6], std::size_t n) {
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d six = _mm256_set1_pd(6.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d neg1 = _mm256_set1_pd(-1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d axx = _mm256_loadu_pd(h[0] + i);
        __m256d ayy = _mm256_loadu_pd(h[1] + i);
        __m256d azz = _mm256_loadu_pd(h[2] + i);
        __m256d axy = _mm256_loadu_pd(h[3] + i);
        __m256d axz = _mm256_loadu_pd(h[4] + i);
        __m256d ayz = _mm256_loadu_pd(h[5] + i);
        __m256d q = _mm256_div_pd(_mm256_add_pd(_mm256_add_pd(axx, ayy), azz), three);
        __m256d bxx = _mm256_sub_pd(axx, q);
        __m256d byy = _mm256_sub_pd(ayy, q);
        __m256d bzz = _mm256_sub_pd(azz, q);
        __m256d diag = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(bxx, bxx),
                                                   _mm256_mul_pd(byy, byy)),
                                     _mm256_mul_pd(bzz, bzz));
        __m256d offd = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(axy, axy),
                                                   _mm256_mul_pd(axz, axz)),
                                     _mm256_mul_pd(ayz, ayz));
        __m256d p2 = _mm256_add_pd(diag, _mm256_mul_pd(two, offd));
        __m256d p = _mm256_sqrt_pd(_mm256_div_pd(p2, six));
        __m256d inv = _mm256_div_pd(one, p);
        __m256d cxx = _mm256_mul_pd(bxx, inv), cyy = _mm256_mul_pd(byy, inv);
        __m256d czz = _mm256_mul_pd(bzz, inv), cxy = _mm256_mul_pd(axy, inv);
        __m256d cxz = _mm256_mul_pd(axz, inv), cyz = _mm256_mul_pd(ayz, inv);
        // det = cxx*(cyy*czz - cyz*cyz) - cxy*(cxy*czz - cyz*cxz) + cxz*(cxy*cyz - cyy*cxz)
        __m256d t1 = _mm256_mul_pd(cxx, _mm256_sub_pd(_mm256_mul_pd(cyy, czz),
                                                      _mm256_mul_pd(cyz, cyz)));
        __m256d t2 = _mm256_mul_pd(cxy, _mm256_sub_pd(_mm256_mul_pd(cxy, czz),
                                                      _mm256_mul_pd(cyz, cxz)));
        __m256d t3 = _mm256_mul_pd(cxz, _mm256_sub_pd(_mm256_mul_pd(cxy, cyz),
                                                      _mm256_mul_pd(cyy, cxz)));
        __m256d det = _mm256_add_pd(_mm256_sub_pd(t1, t2), t3);
        __m256d r = _mm256_mul_pd(det, half);
        // Clamp; p==0 lanes may hold NaN here but take the p==0 branch below.
        r = _mm256_max_pd(r, neg1);
        r = _mm256_min_pd(r, one);
        double ql[4], pl[4], rl[4];
        _mm256_storeu_pd(ql, q);
        _mm256_storeu_pd(pl, p);
        _mm256_storeu_pd(rl, r);
        for (int l = 0; l < 4; ++l)
            ang[i + static_cast<std::size_t>(l)] = pointmath::angle3_tail(ql[l], pl[l], rl[l]);
    }
    for (; i < n; ++i)
        ang[i] = pointmath::angle3_point(h[0][i], h[1][i], h[2][i], h[3][i], h[4][i], h[5][i]);
}

void soliton_rhs(double* dst, const double* ang, const double* v, const double* drift, double vs,
                 double ds, std::size_t n) {
    const __m256d vvs = _mm256_set1_pd(vs);
    const __m256d vds = _mm256_set1_pd(ds);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_loadu_pd(ang + i),
                                  _mm256_mul_pd(vvs, _mm256_loadu_pd(v + i)));
        t = _mm256_add_pd(t, _mm256_mul_pd(vds, _mm256_loadu_pd(drift + i)));
        _mm256_storeu_pd(dst + i, t);
    }
    for (; i < n; ++i) dst[i] = (ang[i] + vs * v[i]) + ds * drift[i];
}

void weighted_add(double* acc, const double* w, const double* g, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_loadu_pd(acc + i),
                                  _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(g + i)));
        _mm256_storeu_pd(acc + i, t);
    }
    for (; i < n; ++i) acc[i] += w[i] * g[i];
}

void axpy(double* acc, double a, const double* g, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_loadu_pd(acc + i),
                                  _mm256_mul_pd(va, _mm256_loadu_pd(g + i)));
        _mm256_storeu_pd(acc + i, t);
    }
    for (; i < n; ++i) acc[i] += a * g[i];
}

double sup_abs(const double* u, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(u + i)));
    double lanes[4];
    _mm256_storeu_pd(lanes, m);
    double s = lanes[0];
    for (int l = 1; l < 4; ++l)
        if (lanes[l] > s) s = lanes[l];
    for (; i < n; ++i) {
        double v = std::fabs(u[i]);
        if (v > s) s = v;
    }
    return s;
}

double sup_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                  _mm256_loadu_pd(b + i))));
    double lanes[4];
    _mm256_storeu_pd(lanes, m);
    double s = lanes[0];
    for (int l = 1; l < 4; ++l)
        if (lanes[l] > s) s = lanes[l];
    for (; i < n; ++i) {
        double v = std::fabs(a[i] - b[i]);
        if (v > s) s = v;
    }
    return s;
}

void minmax(const double* u, std::size_t n, double& lo, double& hi) {
    double l = u[0], h = u[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vl = _mm256_loadu_pd(u);
        __m256d vh = vl;
        for (i = 4; i + 4 <= n; i += 4) {
            __m256d x = _mm256_loadu_pd(u + i);
            vl = _mm256_min_pd(vl, x);
            vh = _mm256_max_pd(vh, x);
        }
        double ll[4], hh[4];
        _mm256_storeu_pd(ll, vl);
        _mm256_storeu_pd(hh, vh);
        l = ll[0];
        h = hh[0];
        for (int k = 1; k < 4; ++k) {
            if (ll[k] < l) l = ll[k];
            if (hh[k] > h) h = hh[k];
        }
    }
    for (; i < n; ++i) {
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

} // namespace lagflow::kernels::avx2_impl

#endif // LAGFLOW_HAVE_AVX2
