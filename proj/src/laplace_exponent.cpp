#include "hjmm/laplace_exponent.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hjmm {

double ExponentPieces::total() const {
    return drift + gauss + j1 + j2 + j3 + j4;
}

namespace {

const Interval kNegTail = Interval::left_open(-kInf, -1.0);
const Interval kNegNear = Interval::open(-1.0, 0.0);
const Interval kPosNear = Interval::open(0.0, 1.0);
const Interval kPosTail = Interval::right_open(1.0, kInf);

void require_nonnegative(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("Laplace exponent: z must be >= 0");
}

// e^{-x} - 1 + x without cancellation for small x
double phi(double x) {
    if (std::abs(x) < 0.1) {
        double term = x * x / 2.0;
        double sum = term;
        for (int k = 3; k < 20; ++k) {
            term *= -x / k;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return std::expm1(-x) + x;
}

// int over the part of nu inside `region` (one-sided, |y| < 1) of f(|y|)
template <class F>
double near_integral(const LevyMeasureSpec& nu, const Interval& region, F f) {
    double total = 0.0;
    for (const Atom& at : nu.atoms()) {
        if (region.contains(at.y)) total += at.mass * f(std::abs(at.y));
    }
    for (const DensityPart& d : nu.parts()) {
        const double lo = std::max(d.lo, region.lo);
        const double hi = std::min(d.hi, region.hi);
        if (!(hi > lo)) continue;
        const double a = d.negative() ? -hi : lo;
        const double b = d.negative() ? -lo : hi;
        auto integrand = [&](double u) {
            const double fu = f(u);
            if (fu == 0.0) return 0.0;
            if (d.kind != DensityKind::PowerLaw) return d.density_abs(u) * fu;
            // u^{-1-alpha} overflows near 0 long before the product does
            return std::copysign(d.c * std::exp(std::log(std::abs(fu)) - (1.0 + d.shape) * std::log(u)), fu);
        };
        total += detail::integrate_finite(integrand, a, b);
    }
    return total;
}

}  // namespace

ExponentPieces J_pieces(const LevyModel& m, double z) {
    require_nonnegative(z);
    ExponentPieces p;
    p.drift = -m.a * z;
    p.gauss = 0.5 * m.q * z * z;
    if (z == 0.0) return p;
    const double tilted = weighted_moment(m.nu, 0, kNegTail, -z);
    p.j1 = std::isinf(tilted) ? kInf : tilted - weighted_moment(m.nu, 0, kNegTail, 0.0);
    p.j2 = near_integral(m.nu, kNegNear, [z](double u) { return phi(-z * u); });
    p.j3 = near_integral(m.nu, kPosNear, [z](double u) { return phi(z * u); });
    p.j4 = weighted_moment(m.nu, 0, kPosTail, z) - weighted_moment(m.nu, 0, kPosTail, 0.0);
    return p;
}

ExponentPieces J_prime_pieces(const LevyModel& m, double z) {
    require_nonnegative(z);
    ExponentPieces p;
    p.drift = -m.a;
    p.gauss = m.q * z;
    p.j1 = weighted_moment(m.nu, 1, kNegTail, -z);
    if (z > 0.0) {
        p.j2 = near_integral(m.nu, kNegNear, [z](double u) { return u * std::expm1(z * u); });
        p.j3 = near_integral(m.nu, kPosNear, [z](double u) { return -u * std::expm1(-z * u); });
    }
    p.j4 = -weighted_moment(m.nu, 1, kPosTail, z);
    return p;
}

ExponentPieces J_second_pieces(const LevyModel& m, double z) {
    require_nonnegative(z);
    ExponentPieces p;
    p.gauss = m.q;
    p.j1 = weighted_moment(m.nu, 2, kNegTail, -z);
    p.j2 = weighted_moment(m.nu, 2, kNegNear, -z);
    p.j3 = weighted_moment(m.nu, 2, kPosNear, z);
    p.j4 = weighted_moment(m.nu, 2, kPosTail, z);
    return p;
}

double eval_J(const LevyModel& m, double z) {
    return J_pieces(m, z).total();
}

double eval_J_prime(const LevyModel& m, double z) {
    const ExponentPieces p = J_prime_pieces(m, z);
    // both tails divergent at z = 0: J'(0) is undefined
    if (std::isinf(p.j1) && std::isinf(p.j4)) return std::nan("");
    return p.total();
}

double eval_J_second(const LevyModel& m, double z) {
    return J_second_pieces(m, z).total();
}

double exponent_domain_sup(const LevyModel& m) {
    double sup = kInf;
    for (const DensityPart& d : m.nu.parts()) {
        if (!d.negative() || !std::isinf(d.lo)) continue;
        switch (d.kind) {
        case DensityKind::PowerLaw: sup = std::min(sup, 0.0); break;
        case DensityKind::Exponential: sup = std::min(sup, d.shape); break;
        case DensityKind::Uniform: break;
        }
    }
    return sup;
}

JPrimeTable::JPrimeTable(const LevyModel& m, double step)
    : model_(m),
      exact_(m.a, m.q, m.nu.atoms_only()),
      dens_(0.0, 0.0, m.nu.densities_only()),
      has_dens_(!m.nu.parts().empty()),
      zsup_(exponent_domain_sup(m)),
      h_(step) {}

void JPrimeTable::extend_to(double s) {
    while (g_.empty() || (static_cast<double>(g_.size()) - 1.0) * h_ < s) {
        const double zk = std::expm1(static_cast<double>(g_.size()) * h_);
        g_.push_back(eval_J_prime(dens_, zk));
        dg_.push_back(eval_J_second(dens_, zk) * (1.0 + zk));
    }
}

double JPrimeTable::table_value(double z) {
    const double s = std::log1p(z);
    // nodes must stay strictly inside the domain of J'
    const double s_next = (std::floor(s / h_) + 1.0) * h_;
    if (std::expm1(s_next) >= zsup_) return eval_J_prime(dens_, z);
    extend_to(s_next);
    std::size_t k = static_cast<std::size_t>(std::floor(s / h_));
    if (k + 1 >= g_.size()) k = g_.size() - 2;
    const double t = (s - static_cast<double>(k) * h_) / h_;
    const double g0 = g_[k];
    const double g1 = g_[k + 1];
    if (!std::isfinite(g0) || !std::isfinite(g1)) return eval_J_prime(dens_, z);
    double m0 = dg_[k] * h_;
    double m1 = dg_[k + 1] * h_;
    // Fritsch-Carlson limiter keeps the interpolant monotone
    const double delta = g1 - g0;
    if (delta == 0.0) {
        m0 = m1 = 0.0;
    } else {
        const double al = m0 / delta;
        const double be = m1 / delta;
        const double r2 = al * al + be * be;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            m0 = tau * al * delta;
            m1 = tau * be * delta;
        }
    }
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * g0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * g1 +
           (t3 - t2) * m1;
}

double JPrimeTable::operator()(double z) {
    double v = eval_J_prime(exact_, z);
    if (has_dens_) {
        if (z == 0.0) {
            v += eval_J_prime(dens_, 0.0);
        } else {
            v += table_value(z);
        }
    }
    return v;
}

}  // namespace hjmm
