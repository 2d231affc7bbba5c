#include "catch_amalgamated.hpp"

#include "hjmm/scenario.hpp"

#include <cmath>
#include <string>

using namespace hjmm;
using nlohmann::json;
using Catch::Approx;

namespace {

json base() {
    return json::parse(R"({
      "levy_model": {"a": 0, "q": 0, "nu": {"atoms": [[1.0, 0.5]]}},
      "volatility": {"kind": "constant", "lambda": 0.3},
      "r0": {"kind": "exp_decay", "level": 1.0, "beta": 1.0},
      "grid": {"t_star": 1.0, "dt": 0.03125, "x_max": 1.0},
      "seed": 3
    })");
}

std::string error_of(const json& j) {
    try {
        parse_scenario(j);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("scenario parses with defaults", "[scenario]") {
    const Scenario s = parse_scenario(base());
    CHECK(s.model.nu.atoms().size() == 1);
    CHECK(s.gamma == 1.0);
    CHECK(s.seed == 3);
    CHECK(s.grid().nt == 32);
    CHECK(s.volatility().lambda_bar() == Approx(0.3));
    const WeightedCurve r0 = s.r0_curve();
    CHECK(r0.size() == s.grid().N() + 1);
    CHECK(r0.values[32] == Approx(std::exp(-1.0)));
    CHECK(s.sweep_levels.size() == 21);
}

TEST_CASE("schema errors name the field", "[scenario]") {
    json j = base();
    j["levy_model"]["q"] = -1;
    CHECK(error_of(j).rfind("levy_model.q:", 0) == 0);

    j = base();
    j["levy_model"]["nu"]["atoms"][0] = json::array({1.0});
    CHECK(error_of(j).rfind("levy_model.nu.atoms[0]", 0) == 0);

    j = base();
    j["grid"].erase("dt");
    CHECK(error_of(j).rfind("grid.dt:", 0) == 0);

    j = base();
    j["r0"]["kind"] = "cubic";
    CHECK(error_of(j).rfind("r0.kind:", 0) == 0);

    j = base();
    j["grid"]["dt"] = 0.3;  // does not divide t_star
    CHECK(error_of(j).rfind("grid", 0) == 0);

    CHECK(error_of(json::array()).rfind("$:", 0) == 0);
}

TEST_CASE("infinite interval ends as strings", "[scenario]") {
    const LevyModel m = parse_levy_model(json::parse(R"({"a": 0, "q": 0, "nu": {"density_parts":
        [{"kind": "exponential", "c": 1, "beta": 2, "lo": 0, "hi": "inf"}]}})"));
    REQUIRE(m.nu.parts().size() == 1);
    CHECK(m.nu.parts()[0].hi == kInf);
}

TEST_CASE("overrides and hash", "[scenario]") {
    CHECK(scenario_hash(json::parse(R"({"a":1})")) == "9c3e82dd6fcae8b1");

    const Scenario a = parse_scenario(base());
    const Scenario b = parse_scenario(base());
    CHECK(scenario_hash(a.source) == scenario_hash(b.source));

    Overrides ov;
    ov.seed = 11;
    ov.dt = 1.0 / 64;
    ov.tol = 1e-8;
    const Scenario c = parse_scenario(base(), ov);
    CHECK(c.seed == 11);
    CHECK(c.grid().nt == 64);
    CHECK(c.solver.tol == 1e-8);
    CHECK(c.source["seed"] == 11);
    CHECK(scenario_hash(c.source) != scenario_hash(a.source));
}
