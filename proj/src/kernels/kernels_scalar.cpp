#include "hjmm/kernels.hpp"

#include <cmath>
#include <limits>

namespace hjmm::kernels {
namespace {

void add_inplace(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void multiply(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double dot(const double* v, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i];
    return s;
}

double weighted_sum_squares(const double* v, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i] * v[i];
    return s;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(a[i] - b[i]);
        if (std::isnan(d)) return std::numeric_limits<double>::quiet_NaN();
        if (d > m) m = d;
    }
    return m;
}

double max_abs(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(v[i]);
        if (std::isnan(d)) return std::numeric_limits<double>::quiet_NaN();
        if (d > m) m = d;
    }
    return m;
}

double min_diff(const double* a, const double* b, std::size_t n) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < m) m = d;
    }
    return m;
}

}  // namespace

const Table& scalar_table() {
    static const Table t{add_inplace, multiply, dot, weighted_sum_squares,
                         max_abs_diff, max_abs, min_diff, "scalar"};
    return t;
}

}  // namespace hjmm::kernels
