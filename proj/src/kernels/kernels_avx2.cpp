// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// a CPUID check, so nothing here may be inlined into generic code.

#include "hjmm/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace hjmm::kernels {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d vabs(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void add_inplace(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
    }
    for (; i < n; ++i) dst[i] += src[i];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

double dot(const double* v, const double* w, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(v + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(v + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(v + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += w[i] * v[i];
    return s;
}

double weighted_sum_squares(const double* v, const double* w, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a = _mm256_loadu_pd(v + i);
        const __m256d b = _mm256_loadu_pd(v + i + 4);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), a), a, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), b), b, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(v + i);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), a), a, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += w[i] * v[i] * v[i];
    return s;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    __m256d nan_seen = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
        m = _mm256_max_pd(m, d);
    }
    if (_mm256_movemask_pd(nan_seen) != 0) return std::numeric_limits<double>::quiet_NaN();
    double r = hmax(m);
    for (; i < n; ++i) {
        const double d = std::abs(a[i] - b[i]);
        if (std::isnan(d)) return std::numeric_limits<double>::quiet_NaN();
        if (d > r) r = d;
    }
    return r;
}

double max_abs(const double* v, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    __m256d nan_seen = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = vabs(_mm256_loadu_pd(v + i));
        nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
        m = _mm256_max_pd(m, d);
    }
    if (_mm256_movemask_pd(nan_seen) != 0) return std::numeric_limits<double>::quiet_NaN();
    double r = hmax(m);
    for (; i < n; ++i) {
        const double d = std::abs(v[i]);
        if (std::isnan(d)) return std::numeric_limits<double>::quiet_NaN();
        if (d > r) r = d;
    }
    return r;
}

double min_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double r = hmin(m);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < r) r = d;
    }
    return r;
}

}  // namespace

const Table& avx2_table() {
    static const Table t{add_inplace, multiply, dot, weighted_sum_squares,
                         max_abs_diff, max_abs, min_diff, "avx2"};
    return t;
}

}  // namespace hjmm::kernels
