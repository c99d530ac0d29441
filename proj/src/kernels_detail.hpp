#pragma once

#include <cstddef>

// Backend implementations behind the public dispatch layer. Signatures mirror
// lagflow::kernels exactly; see kernels.hpp for semantics and the bitwise
// equivalence contract.
namespace lagflow::kernels {

#define LAGFLOW_KERNEL_DECLS                                                                       \
    void combine(double* dst, const double* u, double a, const double* k, std::size_t n);          \
    void second_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n);    \
    void cross_diff(double* dst, const double* up, std::ptrdiff_t si, std::ptrdiff_t sj, double c, \
                    std::size_t n);                                                                \
    void centered_diff(double* dst, const double* up, std::ptrdiff_t s, double c, std::size_t n);  \
    void angle_dim1(double* ang, const double* dxx, std::size_t n);                                \
    void angle_dim2(double* ang, const double* dxx, const double* dyy, const double* dxy,          \
                    std::size_t n);                                                                \
    void angle_dim3(double* ang, const double* const h[6], std::size_t n);                         \
    void soliton_rhs(double* dst, const double* ang, const double* v, const double* drift,         \
                     double vs, double ds, std::size_t n);                                         \
    void weighted_add(double* acc, const double* w, const double* g, std::size_t n);               \
    void axpy(double* acc, double a, const double* g, std::size_t n);                              \
    double sup_abs(const double* u, std::size_t n);                                                \
    double sup_abs_diff(const double* a, const double* b, std::size_t n);                          \
    void minmax(const double* u, std::size_t n, double& lo, double& hi);                           \
    bool all_finite(const double* u, std::size_t n);

namespace scalar_impl {
LAGFLOW_KERNEL_DECLS
}

#ifdef LAGFLOW_HAVE_AVX2
namespace avx2_impl {
LAGFLOW_KERNEL_DECLS
}
#endif

#undef LAGFLOW_KERNEL_DECLS

} // namespace lagflow::kernels
