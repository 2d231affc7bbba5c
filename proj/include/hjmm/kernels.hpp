#pragma once
// Vectorisable inner loops used by the norms, the random-factor builder and
// the monotone solver. Each kernel has a scalar reference implementation and,
// on x86-64, an AVX2/FMA variant. The active variant is picked once at
// start-up from CPUID; set HJMM_SIMD=scalar in the environment to force the
// reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace hjmm::kernels {

struct Table {
    // dst[i] += src[i]
    void (*add_inplace)(double* dst, const double* src, std::size_t n);
    // out[i] = a[i] * b[i]
    void (*multiply)(double* out, const double* a, const double* b, std::size_t n);
    // sum_i w[i] * v[i]
    double (*dot)(const double* v, const double* w, std::size_t n);
    // sum_i w[i] * v[i]^2
    double (*weighted_sum_squares)(const double* v, const double* w, std::size_t n);
    // max_i |a[i] - b[i]|; NaN if any difference is NaN
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    // max_i |v[i]|; NaN if any entry is NaN
    double (*max_abs)(const double* v, std::size_t n);
    // min_i (a[i] - b[i])
    double (*min_diff)(const double* a, const double* b, std::size_t n);
    std::string_view name;
};

const Table& scalar_table();
#if defined(HJMM_HAVE_AVX2)
const Table& avx2_table();
bool cpu_has_avx2();
#endif

// Table selected at runtime.
const Table& active();

inline void add_inplace(std::span<double> dst, std::span<const double> src) {
    active().add_inplace(dst.data(), src.data(), dst.size());
}
inline void multiply(std::span<double> out, std::span<const double> a, std::span<const double> b) {
    active().multiply(out.data(), a.data(), b.data(), out.size());
}
inline double dot(std::span<const double> v, std::span<const double> w) {
    return active().dot(v.data(), w.data(), v.size());
}
inline double weighted_sum_squares(std::span<const double> v, std::span<const double> w) {
    return active().weighted_sum_squares(v.data(), w.data(), v.size());
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return active().max_abs_diff(a.data(), b.data(), a.size());
}
inline double max_abs(std::span<const double> v) {
    return active().max_abs(v.data(), v.size());
}
inline double min_diff(std::span<const double> a, std::span<const double> b) {
    return active().min_diff(a.data(), b.data(), a.size());
}

}  // namespace hjmm::kernels
