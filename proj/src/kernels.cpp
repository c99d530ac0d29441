#include "lagflow/kernels.hpp"

#include <atomic>

#include "kernels_detail.hpp"

namespace lagflow::kernels {

bool avx2_supported() {
#if defined(LAGFLOW_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect_backend() { return avx2_supported() ? Backend::avx2 : Backend::scalar; }

namespace {
std::atomic<Backend> g_backend{detect_backend()};
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported())
        throw usage_error("kernel backend 'avx2' is not supported on this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

Backend parse_backend(const std::string& name) {
    if (name == "auto") return detect_backend();
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    throw usage_error("unknown kernel backend '" + name + "' (expected auto|scalar|avx2)");
}

#ifdef LAGFLOW_HAVE_AVX2
#define LAGFLOW_DISPATCH(fn, ...)                                                                  \
    do {                                                                                           \
        if (active_backend() == Backend::avx2) return avx2_impl::fn(__VA_ARGS__);                  \
        return scalar_impl::fn(__VA_ARGS__);                                                       \
    } while (0)
#else
#define LAGFLOW_DISPATCH(fn, ...) return scalar_impl::fn(__VA_ARGS__)
#endif

void combine(double* dst, const double* u, double a, const double* k, std::size_t n) {
    LAGFLOW_DISPATCH(combine, dst, u, a, k, n);
}
void second_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n) {
    LAGFLOW_DISPATCH(second_diff, dst, up, s, c, n);
}
void cross_diff(double* dst, const double* up, std::ptrdiff_t si, std::ptrdiff_t sj, double c,
                std::size_t n) {
    LAGFLOW_DISPATCH(cross_diff, dst, up, si, sj, c, n);
}
void centered_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n) {
    LAGFLOW_DISPATCH(centered_diff, dst, up, s, c, n);
}
void angle_dim1(double* ang, const double* dxx, std::size_t n) {
    LAGFLOW_DISPATCH(angle_dim1, ang, dxx, n);
}
void angle_dim2(double* ang, const double* dxx, const double* dyy, const double* dxy,
                std::size_t n) {
    LAGFLOW_DISPATCH(angle_dim2, ang, dxx, dyy, dxy, n);
}
void angle_dim3(double* ang, const double* const h[6], std::size_t n) {
    LAGFLOW_DISPATCH(angle_dim3, ang, h, n);
}
void soliton_rhs(double* dst, const double* ang, const double* v, const double* drift, double vs,
                 double ds, std::size_t n) {
    LAGFLOW_DISPATCH(soliton_rhs, dst, ang, v, drift, vs, ds, n);
}
void weighted_add(double* acc, const double* w, const double* g, std::size_t n) {
    LAGFLOW_DISPATCH(weighted_add, acc, w, g, n);
}
void axpy(double* acc, double a, const double* g, std::size_t n) {
    LAGFLOW_DISPATCH(axpy, acc, a, g, n);
}
double sup_abs(const double* u, std::size_t n) { LAGFLOW_DISPATCH(sup_abs, u, n); }
double sup_abs_diff(const double* a, const double* b, std::size_t n) {
    LAGFLOW_DISPATCH(sup_abs_diff, a, b, n);
}
void minmax(const double* u, std::size_t n, double& lo, double& hi) {
    LAGFLOW_DISPATCH(minmax, u, n, lo, hi);
}
bool all_finite(const double* u, std::size_t n) { LAGFLOW_DISPATCH(all_finite, u, n); }

#undef LAGFLOW_DISPATCH

} // namespace lagflow::kernels
