#pragma once
// Curves on a uniform x-grid with the weight e^{gamma x}: the L^{2,gamma}
// and H^{1,gamma} norms, the shift semigroup and the two embedding bounds.
// Integrals use the trapezoid rule and treat the curve as zero past x_max.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hjmm {

struct WeightedCurve {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> values;
    double gamma = 1.0;

    WeightedCurve() = default;
    // throws unless dx > 0, gamma > 0 and all values are finite
    WeightedCurve(double x0_, double dx_, std::vector<double> values_, double gamma_);

    static WeightedCurve sample(const std::function<double(double)>& f, double dx, std::size_t n,
                                double gamma, double x0 = 0.0);

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_max() const { return x(values.empty() ? 0 : values.size() - 1); }
    // linear interpolation, flat beyond either end
    double value_at(double x) const;
    bool nonnegative() const;
};

double norm_l2gamma(const WeightedCurve& c);
double norm_h1gamma(const WeightedCurve& c);
// finite-difference derivative: central inside, second-order one-sided at the ends
std::vector<double> derivative(const WeightedCurve& c);

// S_t h(x) = h(t + x); t must be a multiple of dx, right end padded flat
WeightedCurve shift(const WeightedCurve& c, double t);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

// sup |c| <= 2 gamma^{-1/2} ||c||_{H^{1,gamma}}
BoundCheck sup_bound_check(const WeightedCurve& c, double rel_tol = 1e-6);
// int |c| <= gamma^{-1/2} ||c||_{L^{2,gamma}}
BoundCheck l1_bound_check(const WeightedCurve& c, double rel_tol = 1e-6);

// trapezoid integral of the samples on [0, n dx]
double trapezoid(const std::vector<double>& v, double dx);

void write_curve_csv(std::ostream& os, const WeightedCurve& c);
// reads `x,value` rows (header and `#` lines skipped); the x column must be uniform
WeightedCurve read_curve_csv(std::istream& is, double gamma);

}  // namespace hjmm
