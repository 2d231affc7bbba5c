#pragma once
// JSON scenarios for the command-line front end.
//
//   {
//     "levy_model": {"a": 0, "q": 0, "nu": {"atoms": [[1, 0.5]],
//                    "density_parts": [{"kind": "power_law", "c": 1, "alpha": 0.5, "lo": 0, "hi": 1}]}},
//     "volatility": {"kind": "constant", "lambda": 0.5},
//     "r0": {"kind": "exp_decay", "level": 1, "beta": 1},
//     "grid": {"t_star": 1, "dt": 0.03125, "x_max": 2},
//     "gamma": 1,
//     "solver": {"tol": 1e-10, "max_iter": 200, "cap": 0},
//     "seed": 42
//   }
//
// Interval ends may be given as the strings "inf" and "-inf". Optional
// sections: "simulation", "exponent", "sweep", "price", "martingale".

#include "hjmm/bond_market.hpp"
#include "hjmm/function_space.hpp"
#include "hjmm/hjmm_solver.hpp"
#include "hjmm/levy_model.hpp"
#include "hjmm/path_sim.hpp"
#include "hjmm/volatility.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjmm {

// Schema violation; what() starts with the offending field path.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg) {}
};

struct CurveSpec {
    std::string kind = "flat";  // flat | exp_decay | tabulated
    double level = 0.0;
    double beta = 1.0;
    std::string csv;
};

struct Scenario {
    nlohmann::json source;  // effective scenario after overrides
    LevyModel model;
    nlohmann::json volatility_json;
    CurveSpec r0;
    double t_star = 1.0;
    double dt = 1.0 / 32.0;
    double x_max = 1.0;
    double gamma = 1.0;
    SolverConfig solver;
    std::uint64_t seed = 0;
    int n_threshold = 1000;
    std::size_t max_jumps = 1000000;
    std::string base_dir;  // for relative csv paths

    std::vector<double> z_grid;
    double z0 = 1.0;

    std::vector<double> sweep_levels;
    std::size_t sweep_paths = 1;

    std::vector<double> price_times;
    std::vector<double> price_maturities;

    std::size_t mc_paths = 1000;
    std::vector<double> mc_checkpoints;
    std::vector<double> mc_maturities;

    Grid grid() const { return Grid::make(t_star, x_max, dt); }
    Volatility volatility() const;
    // r0 sampled on the grid from x = 0 to t_star + x_max
    WeightedCurve r0_curve() const;
    SimConfig sim_config() const;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<double> cap;
};

Scenario parse_scenario(const nlohmann::json& j, const Overrides& ov = {}, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path, const Overrides& ov = {});

LevyModel parse_levy_model(const nlohmann::json& j, const std::string& path = "levy_model");

// FNV-1a 64 of the canonical dump, as 16 hex digits
std::string scenario_hash(const nlohmann::json& j);

}  // namespace hjmm
