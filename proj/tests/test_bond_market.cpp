#include "catch_amalgamated.hpp"

#include "hjmm/bond_market.hpp"
#include "hjmm/random_factor.hpp"

#include <chrono>
#include <cmath>

using namespace hjmm;
using Catch::Approx;

namespace {

Field from(const Grid& g, double (*f)(double, double)) {
    Field r(g);
    for (std::size_t i = 0; i <= g.nt; ++i)
        for (std::size_t j = 0; j < g.extent(i); ++j) r(i, j) = f(g.t(i), g.x(j));
    return r;
}

SolveReport solve_scenario(const LevyModel& m, const Volatility& vol, const Grid& g, double (*r0f)(double),
                           std::uint64_t seed, WeightedCurve* r0_out = nullptr) {
    SimConfig sc;
    sc.t_star = g.t_star();
    sc.dt = g.h;
    sc.seed = seed;
    const LevyPathRecord p = simulate(m, sc);
    const WeightedCurve r0 = WeightedCurve::sample(r0f, g.h, g.N() + 1, 1.0);
    if (r0_out != nullptr) *r0_out = r0;
    const RandomFactorField f = compute_a(p, vol, r0, m.q, g);
    JPrimeTable jp(m);
    return solve_monotone(f, vol, jp, {});
}

double exp_decay(double x) { return std::exp(-x); }

}  // namespace

TEST_CASE("frames", "[bond]") {
    const Grid g = Grid::make(1.0, 1.0, 0.125);
    const Field c(g, 0.3);
    const NaturalField nc = to_natural_frame(c);
    CHECK(nc.at(3, 5) == 0.3);
    CHECK_THROWS_AS(nc.at(5, 3), std::invalid_argument);
    const NaturalField lin = to_natural_frame(from(g, [](double t, double x) { return t + x; }));
    for (std::size_t i = 0; i <= g.nt; ++i)
        for (std::size_t j = i; j <= g.N(); ++j) CHECK(lin.at(i, j) == Approx(g.x(j)).margin(1e-15));

    const Grid gp = Grid::make(1.0, 2.0, 1.0 / 32);
    const SolveReport rep =
        solve_scenario(LevyModel(0.0, 0.0, LevyMeasureSpec({{1.0, 0.5}}, {})), Volatility::constant(0.3), gp,
                       exp_decay, 3);
    const Field back = to_moving_frame(to_natural_frame(rep.r));
    CHECK(std::equal(back.flat().begin(), back.flat().end(), rep.r.flat().begin()));
}

TEST_CASE("bond prices", "[bond]") {
    const Grid g = Grid::make(1.0, 2.0, 1.0 / 64);
    const Field zero(g, 0.0);
    CHECK(bond_price(zero, 0.5, 1.5) == 1.0);
    const Field flat(g, 0.05);
    CHECK(bond_price(flat, 0.0, 2.0) == Approx(std::exp(-0.1)).margin(1e-10));
    for (double t : {0.0, 0.25, 1.0}) CHECK(bond_price(flat, t, t) == 1.0);
    const WeightedCurve fc(0.0, 0.01, std::vector<double>(301, 0.05), 1.0);
    CHECK(bond_price(fc, 2.0) == Approx(std::exp(-0.1)).margin(1e-10));
    CHECK_THROWS_AS(bond_price(flat, 0.5, 0.25), std::invalid_argument);

    const Field e = from(g, [](double t, double x) { return std::exp(-(t + x)); });
    CHECK(short_rate(e, 0.0) == 1.0);
    CHECK(short_rate(e, 0.5) == Approx(std::exp(-0.5)));
    CHECK(short_rate(flat, 0.5) == 0.05);
    double prev = 1.0;
    for (int k = 0; k <= 64; ++k) {
        const double p = bond_price(e, 0.25, 0.25 + k / 64.0);
        CHECK(p <= prev);
        CHECK(p > 0.0);
        prev = p;
    }
    CHECK(bond_lower_bound_check(e, 0.25, 1.0).holds);
}

TEST_CASE("solved L = 0 field gives v(t) = e^{-t}", "[bond]") {
    const Grid g = Grid::make(1.0, 1.0, 1.0 / 32);
    const SolveReport rep = solve_scenario(LevyModel(0.0, 0.0, {}), Volatility::constant(1.0), g, exp_decay, 1);
    for (std::size_t i = 0; i <= g.nt; ++i) CHECK(short_rate(rep.r, g.t(i)) == Approx(std::exp(-g.t(i))).epsilon(1e-13));
}

TEST_CASE("HJM drift condition", "[bond]") {
    const Grid g = Grid::make(1.0, 1.0, 1.0 / 1000);
    const SolveReport rep = solve_scenario(LevyModel(1.0, 0.0, {}), Volatility::constant(0.5), g, exp_decay, 1);
    REQUIRE(rep.status == SolveStatus::Converged);
    for (double t : {0.0, 0.5, 1.0}) {
        for (const HjmRow& row : hjm_drift_check(rep.r, Volatility::constant(0.5), LevyModel(1.0, 0.0, {}), t)) {
            CHECK(row.ok);
            CHECK(row.residual < 1e-8);
        }
    }
    const Grid gz = Grid::make(1.0, 1.0, 0.125);
    for (const HjmRow& row : hjm_drift_check(Field(gz, 0.0), Volatility::constant(1.0), LevyModel(0.0, 1.0, {}), 0.5))
        CHECK(row.residual == 0.0);

    // Poisson: second-order quadrature error only
    const LevyModel pm(0.0, 0.0, LevyMeasureSpec({{1.0, 1.0}}, {}));
    const Grid gp = Grid::make(1.0, 2.0, 1.0 / 64);
    const SolveReport rp = solve_scenario(pm, Volatility::constant(1.0), gp, exp_decay, 9);
    for (const HjmRow& row : hjm_drift_check(rp.r, Volatility::constant(1.0), pm, 0.5))
        CHECK(row.residual < 10 * gp.h * (1.0 + eval_J_second(pm, 0.0)));
}

TEST_CASE("martingale diagnostics", "[bond]") {
    MartingaleConfig cfg;
    cfg.n_paths = 50;
    cfg.checkpoints = {0.0, 0.5, 1.0};
    cfg.maturities = {1.0};
    const Grid g = Grid::make(cfg.t_star, cfg.x_max, cfg.h);
    const WeightedCurve r0 = WeightedCurve::sample(exp_decay, cfg.h, g.N() + 1, 1.0);
    const MartingaleReport z = martingale_mc(LevyModel(0.0, 0.0, {}), Volatility::constant(1.0), r0, cfg);
    for (const MartingaleRow& row : z.rows) {
        CHECK(row.se < 1e-15);
        CHECK(row.mean == Approx(row.p0).epsilon(1e-12));
    }
    const WeightedCurve zero(0.0, cfg.h, std::vector<double>(g.N() + 1, 0.0), 1.0);
    for (const MartingaleRow& row : martingale_mc(LevyModel(0.0, 0.0, {}), Volatility::constant(1.0), zero, cfg).rows)
        CHECK(row.mean == 1.0);

    const LevyModel pm(0.0, 0.0, LevyMeasureSpec({{1.0, 0.5}}, {}));
    cfg.n_paths = 2000;
    cfg.threads = 1;
    const MartingaleReport a = martingale_mc(pm, Volatility::constant(0.3), r0, cfg);
    cfg.threads = 4;
    const MartingaleReport b = martingale_mc(pm, Volatility::constant(0.3), r0, cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].mean == b.rows[k].mean);
    CHECK(a.n_used == 2000);
    for (const MartingaleRow& row : a.rows) CHECK(std::abs(row.gap) < 3 * row.se + 10 * cfg.h);
}
