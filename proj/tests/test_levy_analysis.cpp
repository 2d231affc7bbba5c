#include "catch_amalgamated.hpp"

#include "hjmm/laplace_exponent.hpp"
#include "hjmm/levy_analysis.hpp"

#include <cmath>

using namespace hjmm;
using Catch::Approx;

namespace {

LevyModel atom_model(double y, double m) { return LevyModel(0.0, 0.0, LevyMeasureSpec({{y, m}}, {})); }

LevyModel power_law_model(double alpha) {
    return LevyModel(0.0, 0.0, LevyMeasureSpec({}, {DensityPart::power_law(1.0, alpha, 0.0, 1.0)}));
}

// c = 2, beta = 3 on (0, inf) and c = 1, beta = 4 on (-inf, 0)
LevyModel two_sided_exponential() {
    return LevyModel(0.0, 0.0, LevyMeasureSpec({}, {DensityPart::exponential(2.0, 3.0, 0.0, kInf),
                                                     DensityPart::exponential(1.0, 4.0, -kInf, 0.0)}));
}

}  // namespace

TEST_CASE("J on trivial models", "[exponent]") {
    CHECK(eval_J(LevyModel(1.0, 0.0, {}), 1.0) == -1.0);
    const LevyModel w(0.0, 1.0, {});
    for (double z : {0.0, 0.5, 2.0, 7.0}) {
        CHECK(eval_J_prime(w, z) == Approx(z).margin(1e-15));
        CHECK(eval_J_second(w, z) == 1.0);
    }
    CHECK_THROWS_AS(eval_J(w, -0.1), std::invalid_argument);
}

TEST_CASE("J on atoms", "[exponent]") {
    const LevyModel m = atom_model(1.0, 1.0);
    CHECK(eval_J(m, 1.0) == Approx(std::exp(-1.0) - 1.0).margin(1e-14));
    CHECK(eval_J_prime(m, 1.0) == Approx(-std::exp(-1.0)).margin(1e-14));
    CHECK(eval_J_second(m, 1.0) == Approx(std::exp(-1.0)).margin(1e-14));
    const double h = 1e-5;
    CHECK((eval_J(m, 1.0 + h) - eval_J(m, 1.0 - h)) / (2 * h) == Approx(-std::exp(-1.0)).margin(1e-9));
    CHECK((eval_J_prime(m, 1.0 + h) - eval_J_prime(m, 1.0 - h)) / (2 * h) == Approx(std::exp(-1.0)).margin(1e-6));

    const LevyModel half = atom_model(0.5, 1.0);
    CHECK(eval_J(half, 1.0) == Approx(std::exp(-0.5) - 0.5).margin(1e-14));
    CHECK(eval_J_prime(half, 1.0) == Approx(0.5 * (1 - std::exp(-0.5))).margin(1e-14));
}

// reference values from 60-digit quadrature of the defining integrals
TEST_CASE("J against high-precision oracles", "[exponent]") {
    const LevyModel a05 = power_law_model(0.5);
    CHECK(eval_J(a05, 1.0) == Approx(0.276944586407407).epsilon(1e-11));
    CHECK(eval_J_prime(a05, 1.0) == Approx(0.506351734375146).epsilon(1e-11));
    CHECK(eval_J_second(a05, 1.0) == Approx(0.378944691640985).epsilon(1e-11));
    CHECK(eval_J(a05, 3.0) == Approx(1.848303140487006).epsilon(1e-11));
    CHECK(eval_J_prime(a05, 3.0) == Approx(0.991312879537122).epsilon(1e-11));
    CHECK(eval_J_second(a05, 3.0) == Approx(0.151518830621192).epsilon(1e-11));

    const LevyModel a15 = power_law_model(1.5);
    CHECK(eval_J(a15, 1.0) == Approx(0.903450648280767).epsilon(1e-11));
    CHECK(eval_J_prime(a15, 1.0) == Approx(1.723055413592593).epsilon(1e-11));
    CHECK(eval_J_second(a15, 1.0) == Approx(1.493648265624854).epsilon(1e-11));

    const LevyModel ex = two_sided_exponential();
    CHECK(eval_J(ex, 0.5) == Approx(0.00107153422239344).epsilon(1e-10));
    CHECK(eval_J_prime(ex, 0.5) == Approx(0.0395580344311814).epsilon(1e-10));
    CHECK(eval_J_second(ex, 0.5) == Approx(0.139941690962099).epsilon(1e-10));
    CHECK(eval_J(ex, 2.0) == Approx(0.225714708318145).epsilon(1e-10));
    CHECK(eval_J_prime(ex, 2.0) == Approx(0.291190687492406).epsilon(1e-10));
    CHECK(eval_J_second(ex, 2.0) == Approx(0.282).epsilon(1e-10));
}

TEST_CASE("pieces sum to J", "[exponent]") {
    const LevyModel m(0.3, 0.2, LevyMeasureSpec({{-1.5, 0.2}, {0.4, 1.0}, {2.0, 0.3}},
                                              {DensityPart::power_law(0.5, 1.2, 0.0, 1.0),
                                               DensityPart::exponential(1.0, 4.0, -kInf, 0.0)}));
    for (double z : {0.1, 1.0, 3.5}) {
        const ExponentPieces p = J_pieces(m, z);
        CHECK(p.total() == Approx(eval_J(m, z)).epsilon(1e-10));
        CHECK(p.j1 > 0.0);
        CHECK(p.j4 < 0.0);
    }
}

TEST_CASE("divergence and domain", "[exponent]") {
    const LevyModel ex = two_sided_exponential();
    CHECK(exponent_domain_sup(ex) == 4.0);
    CHECK(std::isinf(eval_J(ex, 4.0)));
    CHECK(std::isinf(eval_J_prime(ex, 4.5)));
    CHECK(std::isfinite(eval_J(ex, 3.9)));
    // positive tail without first moment: J'(0) = -inf
    const LevyModel heavy(0.0, 0.0, LevyMeasureSpec({}, {DensityPart::power_law(1.0, 0.5, 1.0, kInf)}));
    CHECK(eval_J_prime(heavy, 0.0) == -kInf);
    CHECK(std::isfinite(eval_J_prime(heavy, 0.1)));
}

TEST_CASE("J' is nondecreasing and matches finite differences", "[exponent]") {
    const LevyModel m(0.1, 0.3, LevyMeasureSpec({{0.5, 1.0}, {-0.3, 0.5}},
                                              {DensityPart::power_law(1.0, 0.8, 0.0, 2.0)}));
    double prev = -kInf;
    for (int k = 0; k <= 40; ++k) {
        const double z = 0.25 * k;
        const double v = eval_J_prime(m, z);
        CHECK(v >= prev);
        CHECK(eval_J_second(m, z) >= 0.0);
        prev = v;
    }
    // Richardson: central-difference error scales with h^2
    const double z = 1.3;
    const double exact = eval_J_prime(m, z);
    auto fd = [&](double h) { return (eval_J(m, z + h) - eval_J(m, z - h)) / (2 * h); };
    const double e1 = std::abs(fd(1e-2) - exact);
    const double e2 = std::abs(fd(1e-3) - exact);
    CHECK(e1 / e2 == Approx(100.0).epsilon(0.5));
}

TEST_CASE("tabulated J' follows the direct evaluation", "[exponent]") {
    const LevyModel m(0.2, 0.0, LevyMeasureSpec({{1.0, 0.5}}, {DensityPart::power_law(1.0, 1.2, 0.0, 1.0),
                                                             DensityPart::exponential(0.5, 2.0, 0.0, kInf)}));
    JPrimeTable table(m);
    for (double z : {0.0, 1e-4, 0.01, 0.3, 1.0, 7.5, 40.0, 300.0}) {
        const double exact = eval_J_prime(m, z);
        CHECK(table(z) == Approx(exact).epsilon(1e-8).margin(1e-10));
    }
}

TEST_CASE("conditions on the reference models", "[analysis]") {
    const LevyModel poisson = atom_model(1.0, 1.0);
    CHECK(check_condition(poisson, Condition::B0) == Verdict::Holds);
    CHECK(check_condition(poisson, Condition::B1) == Verdict::Holds);
    CHECK(check_condition(poisson, Condition::B4) == Verdict::Holds);
    CHECK(check_condition(poisson, Condition::B3) == Verdict::Fails);
    CHECK(classify(poisson, {}).regime == Regime::GlobalSafe);

    const LevyModel wiener(0.0, 0.3, {});
    CHECK(check_condition(wiener, Condition::B3) == Verdict::Holds);
    CHECK(check_condition(wiener, Condition::B1) == Verdict::Fails);
    CHECK(classify(wiener, {}).regime == Regime::ExplosionProne);

    const ExponentReport r05 = classify(power_law_model(0.5), {});
    CHECK(r05.regime == Regime::GlobalSafe);
    CHECK(r05.rho.rho == Approx(1.5).margin(1e-9));
    CHECK(r05.rho.good);

    const ExponentReport r15 = classify(power_law_model(1.5), {});
    CHECK(r15.regime == Regime::ExplosionProne);
    CHECK(r15.rho.rho == Approx(0.5).margin(1e-9));

    const LevyModel neg = atom_model(-0.2, 1.0);
    CHECK(check_condition(neg, Condition::B3) == Verdict::Holds);
    CHECK(check_condition(neg, Condition::B4) == Verdict::Fails);

    // rho = 1 exactly: neither sufficient condition applies
    const LevyModel border = power_law_model(1.0);
    CHECK(check_condition(border, Condition::B3) == Verdict::Undecidable);
    CHECK(check_condition(border, Condition::B4) == Verdict::Undecidable);
}

TEST_CASE("L1 and L2 use the tilt on the negative tail", "[analysis]") {
    const LevyModel m(0.0, 0.0, LevyMeasureSpec({}, {DensityPart::exponential(1.0, 2.0, -kInf, 0.0),
                                                     DensityPart::power_law(1.0, 2.5, 1.0, kInf)}));
    CHECK(check_condition(m, Condition::L1, {1.0}) == Verdict::Holds);
    CHECK(check_condition(m, Condition::L1, {2.0}) == Verdict::Fails);
    CHECK(check_condition(m, Condition::L2, {1.0}) == Verdict::Fails);  // int_1^inf y^3 y^{-3.5} diverges
}

TEST_CASE("B1 implies B0 and bounds J'", "[analysis]") {
    const LevyModel m(-0.2, 0.0, LevyMeasureSpec({{2.0, 0.3}}, {DensityPart::power_law(1.0, 0.4, 0.0, 1.0)}));
    REQUIRE(check_condition(m, Condition::B1) == Verdict::Holds);
    CHECK(check_condition(m, Condition::B0) == Verdict::Holds);
    const double cap = J_prime_limit(m);
    for (double z : {0.0, 1.0, 10.0, 100.0, 1000.0}) CHECK(eval_J_prime(m, z) <= cap + 1e-12);
}

TEST_CASE("linear positivity", "[analysis]") {
    CHECK(check_positivity_linear(atom_model(1.0, 1.0), 2.0));
    CHECK(check_positivity_linear(atom_model(-0.25, 1.0), 2.0));
    CHECK_FALSE(check_positivity_linear(atom_model(-0.75, 1.0), 2.0));
    CHECK_THROWS(check_positivity_linear(atom_model(1.0, 1.0), 0.0));
}

namespace {

GSamples sample(auto g) {
    GSamples s;
    for (int i = 0; i <= 20; ++i) s.x.push_back(0.25 * i);
    for (int j = 0; j <= 20; ++j) s.y.push_back(0.1 * j);
    for (double x : s.x)
        for (double y : s.y) s.g.push_back(g(x, y));
    return s;
}

}  // namespace

TEST_CASE("G conditions on the grid", "[analysis]") {
    const auto lin = sample([](double, double y) { return 0.5 * y; });
    CHECK(check_G_conditions(lin, -1.0, GVariant::G1).holds);
    CHECK(check_G_conditions(lin, -1.0, GVariant::G2).holds);

    const auto one = sample([](double, double) { return 1.0; });
    const GCheckResult r1 = check_G_conditions(one, -1.0, GVariant::G1);
    CHECK_FALSE(r1.holds);
    CHECK(r1.y == 0.0);
    CHECK(r1.clause.rfind("G1(i)", 0) == 0);

    const auto sq = sample([](double, double y) { return y * y; });
    const GCheckResult r2 = check_G_conditions(sq, -2.0, GVariant::G1);
    CHECK_FALSE(r2.holds);
    CHECK(r2.clause.rfind("G1(ii)", 0) == 0);
    // first violation in scan order; y + y^2 (-2) < 0 for y > 1/2
    CHECK(r2.y > 0.5);
    CHECK(r2.y + r2.y * r2.y * (-2.0) == Approx(r2.value));
    CHECK((1.0 + 1.0 * (-2.0)) == -1.0);

    const auto root = sample([](double x, double y) { return std::sqrt(y) * std::exp(-x); });
    GBounds b;
    b.sqrt_coef = 1.0;
    const GCheckResult r3 = check_G_conditions(root, -1.0, GVariant::G3, b);
    CHECK(r3.sqrt_coef_estimate == Approx(1.0));

    GSamples bad = lin;
    bad.g.pop_back();
    CHECK_THROWS_AS(check_G_conditions(bad, -1.0, GVariant::G1), std::invalid_argument);
}

TEST_CASE("mgf consistency", "[analysis][mc]") {
    const auto drift = mgf_consistency(LevyModel(1.0, 0.0, {}), {0.5, 1.0}, 1.0, 10, 1);
    for (const auto& r : drift) CHECK(r.gap < 1e-14);

    const auto pois = mgf_consistency(atom_model(1.0, 0.5), {1.0}, 1.0, 20000, 11);
    CHECK(pois[0].gap < 3.0 * pois[0].se);
    const auto wien = mgf_consistency(LevyModel(0.0, 1.0, {}), {1.0}, 1.0, 20000, 12);
    CHECK(wien[0].tJ == Approx(0.5));
    CHECK(wien[0].gap < 3.0 * wien[0].se);

    const auto skip = mgf_consistency(two_sided_exponential(), {5.0}, 1.0, 10, 1);
    CHECK(skip[0].skipped);
}
