#pragma once
// Internal quadrature helpers. Finite pieces go through double-exponential
// (tanh-sinh) quadrature, which copes with the algebraic endpoint
// singularities of power-law densities at the origin. Semi-infinite pieces
// are cut at a point where an analytic tail bound is below kTailMass and the
// remainder is integrated on geometrically growing panels.

#include <functional>

namespace hjmm::detail {

inline constexpr double kQuadTolerance = 1e-13;
inline constexpr double kTailMass = 1e-12;

// integral of f on the finite interval [a, b]
double integrate_finite(const std::function<double(double)>& f, double a, double b);

// Integral on [a, b] (b may be +inf) of f, where |f(u)| <= c u^s e^{-kappa u}
// for u >= a and kappa > 0. The range is cut where the bound leaves less
// than kTailMass.
double integrate_decaying(const std::function<double(double)>& f, double a, double b,
                          double c, double s, double kappa);

// Smallest cut point Y >= a (found by doubling) such that the tail of
// c * u^s * exp(-kappa u) beyond Y is provably below eps.
double tail_cut(double a, double c, double s, double kappa, double eps);

// integral_A^B u^p e^{-kappa u} du, B may be +inf (requires kappa > 0).
double poly_exp_integral(int p, double kappa, double a, double b);

}  // namespace hjmm::detail
