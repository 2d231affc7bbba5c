#include "hjmm/levy_model.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjmm {

bool Interval::contains(double y) const {
    if (y < lo || y > hi) return false;
    if (y == lo && !lo_closed) return false;
    if (y == hi && !hi_closed) return false;
    return true;
}

bool Interval::empty() const {
    if (std::isnan(lo) || std::isnan(hi)) return true;
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
}

namespace {

void check_support(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("density part: support must satisfy lo < hi");
    if (lo < 0.0 && hi > 0.0) {
        throw std::invalid_argument("density part: support must lie on one side of 0");
    }
}

}  // namespace

DensityPart DensityPart::power_law(double c, double alpha, double lo, double hi) {
    if (!(c > 0.0)) throw std::invalid_argument("power_law: c must be positive");
    if (!std::isfinite(alpha)) throw std::invalid_argument("power_law: alpha must be finite");
    check_support(lo, hi);
    return {DensityKind::PowerLaw, c, alpha, lo, hi};
}

DensityPart DensityPart::exponential(double c, double beta, double lo, double hi) {
    if (!(c > 0.0)) throw std::invalid_argument("exponential: c must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("exponential: beta must be positive");
    }
    check_support(lo, hi);
    return {DensityKind::Exponential, c, beta, lo, hi};
}

DensityPart DensityPart::uniform(double c, double lo, double hi) {
    if (!(c > 0.0)) throw std::invalid_argument("uniform: c must be positive");
    check_support(lo, hi);
    if (std::isinf(lo) || std::isinf(hi)) {
        throw std::invalid_argument("uniform: support must be bounded");
    }
    return {DensityKind::Uniform, c, 0.0, lo, hi};
}

double DensityPart::density_abs(double u) const {
    if (u < abs_lo() || u > abs_hi()) return 0.0;
    switch (kind) {
    case DensityKind::PowerLaw: return c * std::pow(u, -1.0 - shape);
    case DensityKind::Exponential: return c * std::exp(-shape * u);
    case DensityKind::Uniform: return c;
    }
    return 0.0;
}

double DensityPart::density(double y) const {
    if (y < lo || y > hi) return 0.0;
    return density_abs(std::abs(y));
}

namespace {

// int_A^B u^p e^{-kappa u} w(u) du for one density part, in u = |y|
double part_integral(const DensityPart& d, int p, double a, double b, double kappa) {
    if (!(b > a)) return 0.0;
    switch (d.kind) {
    case DensityKind::Uniform:
        return d.c * detail::poly_exp_integral(p, kappa, a, b);
    case DensityKind::Exponential:
        return d.c * detail::poly_exp_integral(p, d.shape + kappa, a, b);
    case DensityKind::PowerLaw: {
        const double s = p - 1.0 - d.shape;  // integrand ~ u^s e^{-kappa u}
        if (a == 0.0 && s <= -1.0) return kInf;
        if (std::isinf(b)) {
            if (kappa < 0.0) return kInf;
            if (kappa == 0.0 && s >= -1.0) return kInf;
        }
        if (kappa == 0.0) {
            if (s == -1.0) return d.c * std::log(b / a);
            const double hi = std::isinf(b) ? 0.0 : std::pow(b, s + 1.0);
            return d.c * (hi - std::pow(a, s + 1.0)) / (s + 1.0);
        }
        auto f = [&](double u) { return d.c * std::pow(u, s) * std::exp(-kappa * u); };
        if (kappa > 0.0) return detail::integrate_decaying(f, a, b, d.c, s, kappa);
        return detail::integrate_finite(f, a, b);
    }
    }
    return 0.0;
}

}  // namespace

double weighted_moment(const LevyMeasureSpec& nu, int p, const Interval& region, double kappa) {
    if (p < 0) throw std::invalid_argument("moment: p must be nonnegative");
    if (region.empty()) throw std::invalid_argument("moment: empty region");
    double total = 0.0;
    for (const Atom& at : nu.atoms()) {
        if (!region.contains(at.y)) continue;
        const double u = std::abs(at.y);
        total += at.mass * std::pow(u, p) * std::exp(-kappa * u);
    }
    for (const DensityPart& d : nu.parts()) {
        const double lo = std::max(d.lo, region.lo);
        const double hi = std::min(d.hi, region.hi);
        if (!(hi > lo)) continue;
        const double a = d.negative() ? -hi : lo;
        const double b = d.negative() ? -lo : hi;
        total += part_integral(d, p, a, b, kappa);
        if (std::isinf(total)) return kInf;
    }
    return total;
}

double moment_integral(const LevyMeasureSpec& nu, int p, const Interval& region, double exp_tilt) {
    if (region.empty()) throw std::invalid_argument("moment_integral: empty region");
    double total = 0.0;
    if (region.lo < 0.0) {
        Interval neg = region;
        if (neg.hi >= 0.0) neg = {region.lo, 0.0, region.lo_closed, false};
        if (!neg.empty()) total += weighted_moment(nu, p, neg, -exp_tilt);
    }
    if (region.hi >= 0.0) {
        Interval pos = region;
        if (pos.lo < 0.0) pos = {0.0, region.hi, true, region.hi_closed};
        if (!pos.empty()) total += weighted_moment(nu, p, pos, 0.0);
    }
    return total;
}

double support_lower_bound(const LevyMeasureSpec& nu) {
    double m = kInf;
    for (const Atom& at : nu.atoms()) m = std::min(m, at.y);
    for (const DensityPart& d : nu.parts()) m = std::min(m, d.lo);
    return m;
}

double small_jump_profile(const LevyMeasureSpec& nu, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("small_jump_profile: x must be positive");
    return weighted_moment(nu, 2, Interval::left_open(0.0, x), 0.0);
}

LevyMeasureSpec::LevyMeasureSpec(std::vector<Atom> atoms, std::vector<DensityPart> parts)
    : atoms_(std::move(atoms)), parts_(std::move(parts)) {
    for (const Atom& at : atoms_) {
        if (!std::isfinite(at.y) || at.y == 0.0) {
            throw std::invalid_argument("atom location must be finite and nonzero");
        }
        if (!(at.mass > 0.0) || !std::isfinite(at.mass)) {
            throw std::invalid_argument("atom mass must be positive");
        }
    }
    const double near = moment_integral(*this, 2, Interval::open(-1.0, 1.0));
    const double far = moment_integral(*this, 0, Interval::left_open(-kInf, -1.0)) +
                       moment_integral(*this, 0, Interval::right_open(1.0, kInf));
    if (!std::isfinite(near) || !std::isfinite(far)) {
        throw std::invalid_argument("Levy measure violates int (y^2 ^ 1) nu(dy) < inf");
    }
}

bool LevyMeasureSpec::infinite_activity() const {
    for (const DensityPart& d : parts_) {
        if (d.kind == DensityKind::PowerLaw && d.abs_lo() == 0.0 && d.shape >= 0.0) return true;
    }
    return false;
}

LevyModel::LevyModel(double a_, double q_, LevyMeasureSpec nu_) : a(a_), q(q_), nu(std::move(nu_)) {
    if (!std::isfinite(a)) throw std::invalid_argument("LevyModel: a must be finite");
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("LevyModel: q must be >= 0");
}

}  // namespace hjmm
