#include "catch_amalgamated.hpp"

#include "hjmm/path_sim.hpp"

#include <cmath>

using namespace hjmm;
using Catch::Approx;

TEST_CASE("compensator", "[path]") {
    const LevyModel atom(0.0, 0.0, LevyMeasureSpec({{0.5, 1.0}}, {}));
    CHECK(compensator_m_n(atom, 4) == Approx(0.5));
    CHECK(compensator_m_n(atom, 1) == 0.0);
    const LevyModel pl(0.0, 0.0, LevyMeasureSpec({}, {DensityPart::power_law(1.0, 0.5, 0.0, 1.0)}));
    CHECK(compensator_m_n(pl, 100) == Approx(1.8).epsilon(1e-10));
}

TEST_CASE("deterministic paths", "[path]") {
    SimConfig sc;
    sc.dt = 0.25;
    const LevyPathRecord p = simulate(LevyModel(1.0, 0.0, {}), sc);
    REQUIRE(p.grid_values.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(p.grid_values[i] == Approx(0.25 * i).margin(1e-15));
    CHECK(p.jumps.empty());
    sc.dt = 0.3;
    CHECK_THROWS_AS(simulate(LevyModel(1.0, 0.0, {}), sc), std::invalid_argument);
}

TEST_CASE("left limits", "[path]") {
    const LevyModel m(0.0, 0.0, LevyMeasureSpec({{1.0, 1.0}}, {}));
    const LevyPathRecord p = make_path(m, 1.0, 0.25, {}, {{0.5, 1.0}, {0.8, -0.5}});
    CHECK(p.value_at_left_limit(0.5) == 0.0);
    CHECK(p.value_at(0.5) == 1.0);
    CHECK(p.value_at(0.6) == p.value_at_left_limit(0.6));
    CHECK(p.value_at(1.0) == 0.5);
    CHECK(p.grid_values == std::vector<double>{0.0, 0.0, 1.0, 1.0, 0.5});
    CHECK_THROWS_AS(p.value_at(1.5), std::invalid_argument);
}

TEST_CASE("reproducible and threshold respected", "[path]") {
    const LevyModel m(0.3, 0.4, LevyMeasureSpec({{-0.3, 1.0}}, {DensityPart::power_law(1.0, 0.8, 0.0, 2.0)}));
    SimConfig sc;
    sc.seed = 99;
    sc.n_threshold = 50;
    const LevyPathRecord a = simulate(m, sc, 3);
    const LevyPathRecord b = simulate(m, sc, 3);
    CHECK(a.grid_values == b.grid_values);
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (std::size_t k = 0; k < a.jumps.size(); ++k) {
        CHECK(a.jumps[k].time == b.jumps[k].time);
        CHECK(a.jumps[k].size == b.jumps[k].size);
        CHECK(std::abs(a.jumps[k].size) > 1.0 / 50);
        CHECK(a.jumps[k].size <= 2.0);
    }
    const LevyPathRecord c = simulate(m, sc, 4);
    CHECK(c.grid_values != a.grid_values);
    CHECK(a.grid_values[0] == 0.0);
    // replay
    double w = 0.0;
    for (std::size_t i = 0; i <= a.steps(); ++i) {
        const double t = i * sc.dt;
        if (i > 0) w += a.brownian_increments[i - 1];
        double js = 0.0;
        for (const Jump& j : a.jumps) js += j.time <= t ? j.size : 0.0;
        CHECK(a.grid_values[i] == Approx((m.a - a.compensator) * t + w + js).margin(1e-12));
    }
}

TEST_CASE("capacity error", "[path]") {
    const LevyModel m(0.0, 0.0, LevyMeasureSpec({{1.0, 1000.0}}, {}));
    SimConfig sc;
    sc.max_jumps = 10;
    CHECK_THROWS_AS(simulate(m, sc), CapacityError);
}

TEST_CASE("Monte Carlo moments", "[path]") {
    SimConfig sc;
    sc.dt = 0.25;
    sc.seed = 5;
    const int n = 10000;
    {
        const LevyModel m(0.0, 0.0, LevyMeasureSpec({{1.0, 0.5}}, {}));
        double s = 0.0, s2 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double c = static_cast<double>(simulate(m, sc, k).jumps.size());
            s += c;
            s2 += c * c;
        }
        const double mean = s / n;
        const double se = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 0.5) < 3 * se);
    }
    {
        const LevyModel m(0.0, 1.0, {});
        double s = 0.0, s2 = 0.0, s4 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double l = simulate(m, sc, k).grid_values.back();
            s += l;
            s2 += l * l;
            s4 += l * l * l * l;
        }
        const double var = s2 / n;
        const double se = std::sqrt((s4 / n - var * var) / n);
        CHECK(std::abs(var - 1.0) < 3 * se);
        CHECK(std::abs(s / n) < 3 * std::sqrt(1.0 / n));
    }
}

TEST_CASE("jump alignment", "[path]") {
    const LevyModel m(0.0, 0.0, LevyMeasureSpec({{1.0, 1.0}}, {}));
    LevyPathRecord p = make_path(m, 1.0, 1.0 / 64, {}, {{0.01, 1.0}, {0.5, 1.0}, {0.51, 2.0}});
    align_jump_times(p, 1.0 / 32);
    CHECK(p.jumps[0].time == 1.0 / 32);
    CHECK(p.jumps[1].time == 0.5);
    CHECK(p.jumps[2].time == 17.0 / 32);
    CHECK(p.grid_values[2] == 1.0);
}
