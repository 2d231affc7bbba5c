#include "catch_amalgamated.hpp"

#include "hjmm/levy_model.hpp"

#include <cmath>

using namespace hjmm;
using Catch::Approx;

TEST_CASE("moment_integral on atoms", "[levy_model]") {
    const LevyMeasureSpec nu({{1.0, 0.5}}, {});
    CHECK(moment_integral(nu, 1, Interval::right_open(1.0, kInf)) == 0.5);
    CHECK(moment_integral(nu, 1, Interval::open(1.0, kInf)) == 0.0);
    CHECK_THROWS_AS(moment_integral(nu, 1, Interval::open(1.0, 1.0)), std::invalid_argument);
}

TEST_CASE("moment_integral on power laws", "[levy_model]") {
    const LevyMeasureSpec tail({}, {DensityPart::power_law(1.0, 1.5, 1.0, kInf)});
    CHECK(moment_integral(tail, 1, Interval::right_open(1.0, kInf)) == Approx(2.0).epsilon(1e-12));
    CHECK(std::isinf(moment_integral(tail, 2, Interval::right_open(1.0, kInf))));

    const LevyMeasureSpec small({}, {DensityPart::power_law(1.0, 0.5, 0.0, 1.0)});
    CHECK(moment_integral(small, 2, Interval::left_open(0.0, 1.0)) == Approx(1.0 / 1.5).margin(1e-6));
    CHECK(std::isinf(moment_integral(small, 0, Interval::left_open(0.0, 1.0))));
    // tilt only acts on the negative axis
    CHECK(moment_integral(small, 2, Interval::left_open(0.0, 1.0), 5.0) ==
          Approx(1.0 / 1.5).margin(1e-12));
}

TEST_CASE("negative tails and tilts", "[levy_model]") {
    // c e^{-3|y|} on (-inf, 0): int_1^inf u e^{(z0-3)u} du closed form
    const LevyMeasureSpec nu({}, {DensityPart::exponential(2.0, 3.0, -kInf, 0.0)});
    const double z0 = 1.0;
    const double k = 3.0 - z0;
    const double expected = 2.0 * std::exp(-k) * (1.0 / k + 1.0 / (k * k));
    CHECK(moment_integral(nu, 1, Interval::left_open(-kInf, -1.0), z0) == Approx(expected).epsilon(1e-12));
    CHECK(std::isinf(moment_integral(nu, 1, Interval::left_open(-kInf, -1.0), 3.0)));

    const LevyMeasureSpec pl({}, {DensityPart::power_law(1.0, 1.5, -kInf, -1.0)});
    CHECK(std::isinf(moment_integral(pl, 0, Interval::left_open(-kInf, -1.0), 0.1)));
    CHECK(moment_integral(pl, 0, Interval::left_open(-kInf, -1.0), 0.0) == Approx(1.0 / 1.5));
}

TEST_CASE("closed form and quadrature agree on exponential parts", "[levy_model]") {
    // a PowerLaw with alpha = -1 is a flat density; mirrored to the negative
    // axis and tilted by -beta it reproduces the exponential part through
    // the quadrature path
    for (double beta : {0.05, 0.7, 3.0}) {
        for (int p = 0; p <= 3; ++p) {
            const LevyMeasureSpec ex({}, {DensityPart::exponential(1.3, beta, 0.2, 4.0)});
            const LevyMeasureSpec un({}, {DensityPart::power_law(1.3, -1.0, -4.0, -0.2)});
            const double a = moment_integral(ex, p, Interval::real_line());
            const double b = moment_integral(un, p, Interval::real_line(), -beta);
            CHECK(a == Approx(b).epsilon(1e-8));
        }
    }
}

TEST_CASE("moment_integral is additive over regions", "[levy_model]") {
    const LevyMeasureSpec nu({{0.3, 1.0}, {-2.0, 0.25}},
                             {DensityPart::power_law(0.8, 0.7, 0.0, 3.0),
                              DensityPart::exponential(1.0, 2.0, -kInf, 0.0)});
    const double whole = moment_integral(nu, 2, Interval::real_line());
    const double parts = moment_integral(nu, 2, Interval::left_open(-kInf, -1.0)) +
                         moment_integral(nu, 2, Interval::open(-1.0, 0.5)) +
                         moment_integral(nu, 2, Interval::right_open(0.5, kInf));
    CHECK(whole == Approx(parts).epsilon(1e-10));
}

TEST_CASE("support_lower_bound", "[levy_model]") {
    CHECK(support_lower_bound(LevyMeasureSpec({{1.0, 1.0}}, {})) == 1.0);
    CHECK(support_lower_bound(LevyMeasureSpec({{-0.25, 1.0}, {2.0, 1.0}}, {})) == -0.25);
    CHECK(support_lower_bound(LevyMeasureSpec({{-0.5, 1.0}}, {DensityPart::power_law(1.0, 0.5, 0.0, 1.0)})) == -0.5);
}

TEST_CASE("small_jump_profile", "[levy_model]") {
    const LevyMeasureSpec pl({}, {DensityPart::power_law(1.0, 0.5, 0.0, 1.0)});
    CHECK(small_jump_profile(pl, 0.25) == Approx(std::pow(0.25, 1.5) / 1.5).epsilon(1e-12));
    const LevyMeasureSpec at({{0.5, 1.0}}, {});
    CHECK(small_jump_profile(at, 0.25) == 0.0);
    CHECK(small_jump_profile(at, 0.75) == 0.25);
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double v = small_jump_profile(pl, k / 20.0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev <= moment_integral(pl, 2, Interval::left_open(0.0, 1.0)) * (1 + 1e-14));
}

TEST_CASE("constructor enforces int (y^2 ^ 1) nu < inf", "[levy_model]") {
    CHECK_THROWS_AS(LevyMeasureSpec({}, {DensityPart::power_law(1.0, 2.0, 0.0, 1.0)}), std::invalid_argument);
    CHECK_THROWS_AS(LevyMeasureSpec({}, {DensityPart::power_law(1.0, 2.5, -1.0, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(LevyMeasureSpec({}, {DensityPart::power_law(1.0, -0.5, 1.0, kInf)}), std::invalid_argument);
    CHECK_NOTHROW(LevyMeasureSpec({}, {DensityPart::power_law(1.0, 1.99, 0.0, 1.0)}));
    CHECK_THROWS(DensityPart::power_law(1.0, 0.5, -1.0, 1.0));
    CHECK_THROWS(DensityPart::uniform(1.0, 0.0, kInf));
    CHECK_THROWS(LevyMeasureSpec({{0.5, -1.0}}, {}));
    CHECK_THROWS(LevyModel(0.0, -0.1, {}));
}
