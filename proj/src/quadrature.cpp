#include "quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjmm::detail {

namespace {

boost::math::quadrature::tanh_sinh<double>& integrator() {
    thread_local boost::math::quadrature::tanh_sinh<double> ts(18);
    return ts;
}

// Upper bound of int_Y^inf c u^s e^{-kappa u} du, valid once Y >= 2 s / kappa.
double tail_bound(double y, double c, double s, double kappa) {
    const double head = c * std::exp(s * std::log(y) - kappa * y);
    return s <= 0.0 ? head / kappa : 2.0 * head / kappa;
}

}  // namespace

double integrate_finite(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    return integrator().integrate(f, a, b, kQuadTolerance, &err, &l1);
}

double tail_cut(double a, double c, double s, double kappa, double eps) {
    if (!(kappa > 0.0)) throw std::invalid_argument("tail_cut: kappa must be positive");
    double y = std::max({a, 1.0 / kappa, s > 0.0 ? 2.0 * s / kappa : 0.0});
    if (y <= 0.0) y = 1.0;
    for (int i = 0; i < 200; ++i) {
        if (tail_bound(y, c, s, kappa) < eps) return y;
        y *= 2.0;
    }
    throw std::runtime_error("tail_cut: no cut point found");
}

double integrate_decaying(const std::function<double(double)>& f, double a, double b,
                          double c, double s, double kappa) {
    if (!(b > a)) return 0.0;
    const double cut = std::min(b, tail_cut(a, c, s, kappa, kTailMass));
    // panels [a, a+w], [a+w, a+3w], ... with w of the order of the decay length
    double total = 0.0;
    double lo = a;
    double width = std::min(1.0 / kappa, std::max(cut - a, 0.0));
    if (a == 0.0) width = std::min(width, 1.0);
    while (lo < cut) {
        const double hi = std::min(cut, lo + width);
        total += integrate_finite(f, lo, hi);
        lo = hi;
        width *= 2.0;
    }
    return total;
}

double poly_exp_integral(int p, double kappa, double a, double b) {
    if (p < 0) throw std::invalid_argument("poly_exp_integral: negative power");
    if (!(b > a)) return 0.0;
    if (std::isinf(b)) {
        if (!(kappa > 0.0)) return std::numeric_limits<double>::infinity();
    }
    if (kappa == 0.0) {
        return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
    }
    if (std::isfinite(b) && std::abs(kappa) * b < 0.5) {
        // closed form cancels badly for tiny kappa; the integrand is smooth
        auto f = [p, kappa](double u) { return std::pow(u, p) * std::exp(-kappa * u); };
        return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
    }
    // antiderivative F(u) = -e^{-kappa u} sum_k p!/k! u^k / kappa^{p-k+1}
    auto antiderivative = [p, kappa](double u) {
        if (std::isinf(u)) return 0.0;
        double sum = 0.0;
        double coef = 1.0;  // p!/k! built from k = p downwards
        for (int k = p; k >= 0; --k) {
            sum += coef * std::pow(u, k) / std::pow(kappa, p - k + 1);
            coef *= k;
        }
        return -std::exp(-kappa * u) * sum;
    };
    return antiderivative(b) - antiderivative(a);
}

}  // namespace hjmm::detail
