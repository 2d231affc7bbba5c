#include "hjmm/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjmm {

Volatility Volatility::constant(double lambda) {
    Volatility v;
    v.kind_ = VolKind::Constant;
    v.c0_ = lambda;
    v.finish();
    return v;
}

Volatility Volatility::parametric(double c0, double c1, double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("volatility: beta must be >= 0");
    Volatility v;
    v.kind_ = VolKind::Parametric;
    v.c0_ = c0;
    v.c1_ = c1;
    v.beta_ = beta;
    v.finish();
    return v;
}

Volatility Volatility::tabulated(WeightedCurve samples) {
    if (samples.size() < 3) throw std::invalid_argument("volatility: table needs at least 3 points");
    Volatility v;
    v.kind_ = VolKind::Tabulated;
    v.table_ = samples;
    v.d1_ = samples;
    v.d1_.values = hjmm::derivative(samples);
    v.d2_ = samples;
    v.d2_.values = hjmm::derivative(v.d1_);
    v.finish();
    return v;
}

void Volatility::finish() {
    switch (kind_) {
    case VolKind::Constant:
        low_ = bar_ = c0_;
        break;
    case VolKind::Parametric:
        low_ = std::min(c0_, c0_ + c1_);
        bar_ = std::max(c0_, c0_ + c1_);
        if (beta_ == 0.0) low_ = bar_ = c0_ + c1_;
        break;
    case VolKind::Tabulated: {
        const auto [lo, hi] = std::minmax_element(table_.values.begin(), table_.values.end());
        low_ = *lo;
        bar_ = *hi;
        break;
    }
    }
    if (!(low_ > 0.0) || !std::isfinite(bar_)) {
        throw std::invalid_argument("volatility: need 0 < lambda_low <= lambda(x) <= lambda_bar < inf");
    }
}

double Volatility::operator()(double x) const {
    switch (kind_) {
    case VolKind::Constant: return c0_;
    case VolKind::Parametric: return c0_ + c1_ * std::exp(-beta_ * x);
    case VolKind::Tabulated: return table_.value_at(x);
    }
    return 0.0;
}

double Volatility::derivative(double x) const {
    switch (kind_) {
    case VolKind::Constant: return 0.0;
    case VolKind::Parametric: return -beta_ * c1_ * std::exp(-beta_ * x);
    case VolKind::Tabulated: return d1_.value_at(x);
    }
    return 0.0;
}

double Volatility::second_derivative(double x) const {
    switch (kind_) {
    case VolKind::Constant: return 0.0;
    case VolKind::Parametric: return beta_ * beta_ * c1_ * std::exp(-beta_ * x);
    case VolKind::Tabulated: return d2_.value_at(x);
    }
    return 0.0;
}

double Volatility::derivative_bound() const {
    switch (kind_) {
    case VolKind::Constant: return 0.0;
    case VolKind::Parametric: return std::abs(beta_ * c1_);
    case VolKind::Tabulated: {
        double m = 0.0;
        for (double v : d1_.values) m = std::max(m, std::abs(v));
        return m;
    }
    }
    return 0.0;
}

double Volatility::second_derivative_bound() const {
    switch (kind_) {
    case VolKind::Constant: return 0.0;
    case VolKind::Parametric: return std::abs(beta_ * beta_ * c1_);
    case VolKind::Tabulated: {
        double m = 0.0;
        for (double v : d2_.values) m = std::max(m, std::abs(v));
        return m;
    }
    }
    return 0.0;
}

}  // namespace hjmm
