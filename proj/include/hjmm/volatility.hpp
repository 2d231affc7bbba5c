#pragma once
// Volatility profile lambda(x) of the linear diffusion g(x, r) = lambda(x) r.

#include "hjmm/function_space.hpp"

namespace hjmm {

enum class VolKind { Constant, Parametric, Tabulated };

class Volatility {
public:
    static Volatility constant(double lambda);
    // c0 + c1 e^{-beta x}
    static Volatility parametric(double c0, double c1, double beta);
    // linear interpolation of the samples, flat outside
    static Volatility tabulated(WeightedCurve samples);

    VolKind kind() const { return kind_; }
    bool is_constant() const { return kind_ == VolKind::Constant; }

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double lambda_low() const { return low_; }
    double lambda_bar() const { return bar_; }
    // sup |lambda'| and sup |lambda''| over x >= 0 (grid values for tables)
    double derivative_bound() const;
    double second_derivative_bound() const;

    double c0() const { return c0_; }
    double c1() const { return c1_; }
    double beta() const { return beta_; }
    const WeightedCurve& table() const { return table_; }

private:
    Volatility() = default;
    void finish();

    VolKind kind_ = VolKind::Constant;
    double c0_ = 0.0, c1_ = 0.0, beta_ = 0.0;
    WeightedCurve table_;
    WeightedCurve d1_, d2_;
    double low_ = 0.0, bar_ = 0.0;
};

}  // namespace hjmm
