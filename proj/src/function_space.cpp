#include "hjmm/function_space.hpp"

#include "hjmm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hjmm {

WeightedCurve::WeightedCurve(double x0_, double dx_, std::vector<double> values_, double gamma_)
    : x0(x0_), dx(dx_), values(std::move(values_)), gamma(gamma_) {
    if (!(dx > 0.0)) throw std::invalid_argument("WeightedCurve: dx must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("WeightedCurve: gamma must be positive");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("WeightedCurve: values must be finite");
    }
}

WeightedCurve WeightedCurve::sample(const std::function<double(double)>& f, double dx, std::size_t n,
                                    double gamma, double x0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(x0 + static_cast<double>(i) * dx);
    return {x0, dx, std::move(v), gamma};
}

double WeightedCurve::value_at(double x) const {
    if (values.empty()) return 0.0;
    const double pos = (x - x0) / dx;
    if (pos <= 0.0) return values.front();
    const std::size_t n = values.size();
    if (pos >= static_cast<double>(n - 1)) return values.back();
    const std::size_t k = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(k);
    return (1.0 - t) * values[k] + t * values[k + 1];
}

bool WeightedCurve::nonnegative() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
}

namespace {

// trapezoid weights times e^{gamma x}
std::vector<double> weights(const WeightedCurve& c) {
    const std::size_t n = c.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double end = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        w[i] = end * c.dx * std::exp(c.gamma * c.x(i));
    }
    return w;
}

}  // namespace

double trapezoid(const std::vector<double>& v, double dx) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * dx;
}

double norm_l2gamma(const WeightedCurve& c) {
    if (c.size() < 2) return 0.0;
    const std::vector<double> w = weights(c);
    return std::sqrt(kernels::weighted_sum_squares(c.values, w));
}

std::vector<double> derivative(const WeightedCurve& c) {
    const std::size_t n = c.size();
    if (n < 3) throw std::invalid_argument("derivative: need at least 3 grid points");
    const std::vector<double>& v = c.values;
    std::vector<double> d(n);
    const double h = c.dx;
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    return d;
}

double norm_h1gamma(const WeightedCurve& c) {
    if (c.size() < 3) throw std::invalid_argument("norm_h1gamma: need at least 3 grid points");
    const std::vector<double> w = weights(c);
    const std::vector<double> d = derivative(c);
    return std::sqrt(kernels::weighted_sum_squares(c.values, w) + kernels::weighted_sum_squares(d, w));
}

WeightedCurve shift(const WeightedCurve& c, double t) {
    if (t < 0.0) throw std::invalid_argument("shift: t must be nonnegative");
    const double cells = t / c.dx;
    const double k = std::round(cells);
    if (std::abs(cells - k) > 1e-9 * std::max(1.0, cells)) {
        throw std::invalid_argument("shift: t must be a multiple of dx");
    }
    const std::size_t off = static_cast<std::size_t>(k);
    WeightedCurve out = c;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) out.values[i] = i + off < n ? c.values[i + off] : c.values.back();
    return out;
}

BoundCheck sup_bound_check(const WeightedCurve& c, double rel_tol) {
    BoundCheck b;
    b.lhs = kernels::max_abs(c.values);
    b.rhs = 2.0 / std::sqrt(c.gamma) * norm_h1gamma(c);
    b.holds = b.lhs <= b.rhs * (1.0 + rel_tol);
    return b;
}

BoundCheck l1_bound_check(const WeightedCurve& c, double rel_tol) {
    BoundCheck b;
    std::vector<double> a(c.values.size());
    std::transform(c.values.begin(), c.values.end(), a.begin(), [](double v) { return std::abs(v); });
    b.lhs = trapezoid(a, c.dx);
    b.rhs = norm_l2gamma(c) / std::sqrt(c.gamma);
    b.holds = b.lhs <= b.rhs * (1.0 + rel_tol);
    return b;
}

void write_curve_csv(std::ostream& os, const WeightedCurve& c) {
    os << "x,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < c.size(); ++i) os << c.x(i) << ',' << c.values[i] << '\n';
}

WeightedCurve read_curve_csv(std::istream& is, double gamma) {
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("curve csv: expected x,value");
        double x = 0.0, v = 0.0;
        try {
            x = std::stod(line.substr(0, comma));
            v = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            if (xs.empty()) continue;  // header
            throw std::invalid_argument("curve csv: bad number in line: " + line);
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 2) throw std::invalid_argument("curve csv: need at least 2 rows");
    const double dx = xs[1] - xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs[i] - xs[0] - static_cast<double>(i) * dx) > 1e-9 * std::max(1.0, std::abs(xs[i]))) {
            throw std::invalid_argument("curve csv: x column must be uniform");
        }
    }
    return {xs[0], dx, std::move(vs), gamma};
}

}  // namespace hjmm
