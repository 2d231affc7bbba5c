#include "catch_amalgamated.hpp"

#include "hjmm/function_space.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace hjmm;
using Catch::Approx;

namespace {

WeightedCurve decay(double dx, double x_max) {
    return WeightedCurve::sample([](double x) { return std::exp(-x); }, dx,
                                 static_cast<std::size_t>(std::llround(x_max / dx)) + 1, 1.0);
}

// nonnegative cubic spline through random knots, clamped at zero
WeightedCurve random_spline(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int knots = 6 + static_cast<int>(u(rng) * 6);
    const double span = 2.0 + 8.0 * u(rng);
    std::vector<double> kv(knots);
    for (double& v : kv) v = 2.0 * u(rng);
    const double gamma = 0.2 + 2.0 * u(rng);
    const double step = span / (knots - 1);
    auto f = [&](double x) {
        const double pos = std::min(x / step, knots - 1.000001);
        const int k = static_cast<int>(pos);
        const double t = pos - k;
        const double p0 = kv[k], p1 = kv[k + 1];
        const double m0 = k > 0 ? 0.5 * (kv[k + 1] - kv[k - 1]) : p1 - p0;
        const double m1 = k + 2 < knots ? 0.5 * (kv[k + 2] - kv[k]) : p1 - p0;
        const double t2 = t * t, t3 = t2 * t;
        const double v = (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
        return std::max(v, 0.0) * std::exp(-x);
    };
    return WeightedCurve::sample(f, span / 2000.0, 2001, gamma);
}

}  // namespace

TEST_CASE("weighted norms", "[space]") {
    CHECK(norm_l2gamma(decay(1e-3, 40.0)) == Approx(1.0).margin(1e-5));
    CHECK(norm_h1gamma(decay(1e-3, 40.0)) == Approx(std::sqrt(2.0)).margin(1e-4));
    const WeightedCurve z(0.0, 0.1, std::vector<double>(10, 0.0), 1.0);
    CHECK(norm_l2gamma(z) == 0.0);
    CHECK(norm_h1gamma(z) == 0.0);
    // x e^{-x}: 2 + 1 under the weight e^x
    const WeightedCurve xe =
        WeightedCurve::sample([](double x) { return x * std::exp(-x); }, 1e-3, 50001, 1.0);
    CHECK(norm_h1gamma(xe) == Approx(std::sqrt(3.0)).margin(1e-4));
    CHECK_THROWS_AS(norm_h1gamma(WeightedCurve(0.0, 0.1, {1.0, 2.0}, 1.0)), std::invalid_argument);
}

TEST_CASE("homogeneity and trapezoid order", "[space]") {
    WeightedCurve c = decay(1e-2, 20.0);
    const double n = norm_l2gamma(c);
    for (double& v : c.values) v *= -3.0;
    CHECK(norm_l2gamma(c) == Approx(3.0 * n).epsilon(1e-15));
    const double e1 = std::abs(norm_l2gamma(decay(0.02, 30.0)) - 1.0);
    const double e2 = std::abs(norm_l2gamma(decay(0.01, 30.0)) - 1.0);
    CHECK(e2 / e1 == Approx(0.25).margin(0.02));
}

TEST_CASE("shift semigroup", "[space]") {
    const double dx = std::log(2.0) / 693.0;
    const WeightedCurve c = decay(dx, 40.0);
    CHECK(norm_l2gamma(shift(c, std::log(2.0))) == Approx(0.5).margin(1e-5));
    CHECK(shift(c, 0.0).values == c.values);
    const WeightedCurve d = decay(0.01, 10.0);
    const WeightedCurve s1 = shift(d, 1.0);
    for (std::size_t i = 0; i + 100 < d.size(); ++i) CHECK(s1.values[i] == d.values[i + 100]);
    CHECK(shift(shift(d, 0.3), 0.5).values == shift(d, 0.8).values);
    CHECK(norm_l2gamma(s1) <= std::exp(-0.5) * norm_l2gamma(d) + 1e-3);
    CHECK_THROWS_AS(shift(d, 0.005), std::invalid_argument);
}

TEST_CASE("embedding bounds", "[space]") {
    const WeightedCurve c = decay(1e-3, 40.0);
    const BoundCheck s = sup_bound_check(c);
    CHECK(s.lhs == Approx(1.0));
    CHECK(s.rhs == Approx(2.0 * std::sqrt(2.0)).margin(1e-4));
    CHECK(s.holds);
    const BoundCheck l = l1_bound_check(c);
    CHECK(l.lhs == Approx(1.0).margin(1e-5));
    CHECK(l.rhs == Approx(1.0).margin(1e-5));
    CHECK(l.holds);
    const WeightedCurve z(0.0, 0.1, std::vector<double>(10, 0.0), 1.0);
    CHECK(sup_bound_check(z).holds);
    CHECK(l1_bound_check(z).holds);

    std::mt19937_64 rng(2024);
    for (int k = 0; k < 50; ++k) {
        const WeightedCurve r = random_spline(rng);
        REQUIRE(r.nonnegative());
        CHECK(sup_bound_check(r).holds);
        CHECK(l1_bound_check(r).holds);
    }
}

TEST_CASE("curve csv round trip", "[space]") {
    const WeightedCurve c = decay(0.125, 2.0);
    std::stringstream ss;
    write_curve_csv(ss, c);
    const WeightedCurve back = read_curve_csv(ss, 1.0);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(back.values[i] == c.values[i]);
    CHECK_THROWS_AS(WeightedCurve(0.0, 0.1, {1.0, NAN}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightedCurve(0.0, 0.0, {1.0}, 1.0), std::invalid_argument);
}
