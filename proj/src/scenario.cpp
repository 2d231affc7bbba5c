#include "hjmm/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hjmm {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ScenarioError(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ScenarioError(path + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ScenarioError(path, "expected a number");
}

double get_number(const json& j, const std::string& key, const std::string& path) {
    return number(require(j, key, path), path + "." + key);
}

double opt_number(const json& j, const std::string& key, const std::string& path, double def) {
    if (!j.contains(key)) return def;
    return number(j.at(key), path + "." + key);
}

std::uint64_t opt_uint(const json& j, const std::string& key, const std::string& path, std::uint64_t def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        throw ScenarioError(path + "." + key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ScenarioError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) throw ScenarioError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

template <class F>
auto rethrow_as_schema(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(path, e.what());
    }
}

WeightedCurve read_csv_file(const std::string& file, double gamma, const std::string& path) {
    std::ifstream in(file);
    if (!in) throw ScenarioError(path, "cannot open " + file);
    return rethrow_as_schema(path, [&] { return read_curve_csv(in, gamma); });
}

std::string resolve(const std::string& base, const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (std::filesystem::path(base) / fp).string();
}

}  // namespace

LevyModel parse_levy_model(const json& j, const std::string& path) {
    const double a = get_number(j, "a", path);
    const double q = get_number(j, "q", path);
    if (!std::isfinite(a)) throw ScenarioError(path + ".a", "must be finite");
    if (!(q >= 0.0) || !std::isfinite(q)) throw ScenarioError(path + ".q", "must be finite and >= 0");
    std::vector<Atom> atoms;
    std::vector<DensityPart> parts;
    if (j.contains("nu")) {
        const json& nu = j.at("nu");
        const std::string np = path + ".nu";
        if (!nu.is_object()) throw ScenarioError(np, "expected an object");
        if (nu.contains("atoms")) {
            const json& arr = nu.at("atoms");
            if (!arr.is_array()) throw ScenarioError(np + ".atoms", "expected an array");
            for (std::size_t k = 0; k < arr.size(); ++k) {
                const std::string ap = np + ".atoms[" + std::to_string(k) + "]";
                if (!arr[k].is_array() || arr[k].size() != 2) throw ScenarioError(ap, "expected [y, mass]");
                const double y = number(arr[k][0], ap + "[0]");
                const double m = number(arr[k][1], ap + "[1]");
                if (!std::isfinite(y) || !(m > 0.0) || !std::isfinite(m)) {
                    throw ScenarioError(ap, "need finite y and finite mass > 0");
                }
                atoms.push_back({y, m});
            }
        }
        if (nu.contains("density_parts")) {
            const json& arr = nu.at("density_parts");
            if (!arr.is_array()) throw ScenarioError(np + ".density_parts", "expected an array");
            for (std::size_t k = 0; k < arr.size(); ++k) {
                const std::string dp = np + ".density_parts[" + std::to_string(k) + "]";
                const json& d = arr[k];
                const std::string kind = get_string(d, "kind", dp);
                const double c = get_number(d, "c", dp);
                const double lo = get_number(d, "lo", dp);
                const double hi = get_number(d, "hi", dp);
                parts.push_back(rethrow_as_schema(dp, [&] {
                    if (kind == "power_law") return DensityPart::power_law(c, get_number(d, "alpha", dp), lo, hi);
                    if (kind == "exponential") return DensityPart::exponential(c, get_number(d, "beta", dp), lo, hi);
                    if (kind == "uniform") return DensityPart::uniform(c, lo, hi);
                    throw ScenarioError(dp + ".kind", "unknown density kind '" + kind + "'");
                }));
            }
        }
    }
    return rethrow_as_schema(path + ".nu", [&] { return LevyModel(a, q, LevyMeasureSpec(atoms, parts)); });
}

Volatility Scenario::volatility() const {
    const json& v = volatility_json;
    const std::string p = "volatility";
    const std::string kind = get_string(v, "kind", p);
    return rethrow_as_schema(p, [&] {
        if (kind == "constant") return Volatility::constant(get_number(v, "lambda", p));
        if (kind == "parametric") {
            return Volatility::parametric(get_number(v, "c0", p), get_number(v, "c1", p), get_number(v, "beta", p));
        }
        if (kind == "tabulated") return Volatility::tabulated(read_csv_file(resolve(base_dir, get_string(v, "csv", p)), gamma, p + ".csv"));
        throw ScenarioError(p + ".kind", "unknown volatility kind '" + kind + "'");
    });
}

WeightedCurve Scenario::r0_curve() const {
    const Grid g = grid();
    const std::size_t n = g.N() + 1;
    if (r0.kind == "flat") return WeightedCurve(0.0, dt, std::vector<double>(n, r0.level), gamma);
    if (r0.kind == "exp_decay") {
        const double level = r0.level, beta = r0.beta;
        return WeightedCurve::sample([&](double x) { return level * std::exp(-beta * x); }, dt, n, gamma);
    }
    const WeightedCurve table = read_csv_file(resolve(base_dir, r0.csv), gamma, "r0.csv");
    return WeightedCurve::sample([&](double x) { return table.value_at(x); }, dt, n, gamma);
}

SimConfig Scenario::sim_config() const {
    SimConfig c;
    c.t_star = t_star;
    c.dt = dt;
    c.n_threshold = n_threshold;
    c.seed = seed;
    c.max_jumps = max_jumps;
    return c;
}

Scenario parse_scenario(const json& j_in, const Overrides& ov, const std::string& base_dir) {
    if (!j_in.is_object()) throw ScenarioError("$", "scenario must be a JSON object");
    json j = j_in;
    if (ov.seed) j["seed"] = *ov.seed;
    if (ov.dt) j["grid"]["dt"] = *ov.dt;
    if (ov.tol) j["solver"]["tol"] = *ov.tol;
    if (ov.max_iter) j["solver"]["max_iter"] = *ov.max_iter;
    if (ov.cap) j["solver"]["cap"] = *ov.cap;

    Scenario s;
    s.source = j;
    s.base_dir = base_dir;
    s.model = parse_levy_model(require(j, "levy_model", "$"), "levy_model");

    s.volatility_json = require(j, "volatility", "$");
    s.gamma = opt_number(j, "gamma", "$", 1.0);
    if (!(s.gamma > 0.0) || !std::isfinite(s.gamma)) throw ScenarioError("gamma", "must be positive");

    const json& grid = require(j, "grid", "$");
    s.t_star = get_number(grid, "t_star", "grid");
    s.dt = get_number(grid, "dt", "grid");
    s.x_max = get_number(grid, "x_max", "grid");
    rethrow_as_schema("grid", [&] { return s.grid(); });

    const json& r0 = require(j, "r0", "$");
    s.r0.kind = get_string(r0, "kind", "r0");
    if (s.r0.kind == "flat") {
        s.r0.level = get_number(r0, "level", "r0");
    } else if (s.r0.kind == "exp_decay") {
        s.r0.level = opt_number(r0, "level", "r0", 1.0);
        s.r0.beta = get_number(r0, "beta", "r0");
    } else if (s.r0.kind == "tabulated") {
        s.r0.csv = get_string(r0, "csv", "r0");
    } else {
        throw ScenarioError("r0.kind", "unknown curve kind '" + s.r0.kind + "'");
    }
    if (!std::isfinite(s.r0.level) || !std::isfinite(s.r0.beta)) throw ScenarioError("r0", "values must be finite");
    s.volatility();  // validate early

    if (j.contains("solver")) {
        const json& sv = j.at("solver");
        if (!sv.is_object()) throw ScenarioError("solver", "expected an object");
        s.solver.tol = opt_number(sv, "tol", "solver", s.solver.tol);
        s.solver.max_iter = static_cast<int>(opt_uint(sv, "max_iter", "solver", s.solver.max_iter));
        s.solver.cap = opt_number(sv, "cap", "solver", 0.0);
        if (!(s.solver.tol > 0.0)) throw ScenarioError("solver.tol", "must be positive");
        if (s.solver.max_iter < 1) throw ScenarioError("solver.max_iter", "must be >= 1");
        if (!(s.solver.cap >= 0.0)) throw ScenarioError("solver.cap", "must be >= 0 (0 selects the default)");
    }
    s.solver.gamma = s.gamma;
    s.seed = opt_uint(j, "seed", "$", 0);

    if (j.contains("simulation")) {
        const json& sim = j.at("simulation");
        s.n_threshold = static_cast<int>(opt_uint(sim, "n_threshold", "simulation", 1000));
        s.max_jumps = opt_uint(sim, "max_jumps", "simulation", 1000000);
        if (s.n_threshold < 1) throw ScenarioError("simulation.n_threshold", "must be >= 1");
    }

    s.z_grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    if (j.contains("exponent")) {
        const json& e = j.at("exponent");
        if (e.contains("z_grid")) s.z_grid = number_list(e.at("z_grid"), "exponent.z_grid");
        s.z0 = opt_number(e, "z0", "exponent", 1.0);
        for (std::size_t k = 0; k < s.z_grid.size(); ++k) {
            if (!(s.z_grid[k] >= 0.0)) throw ScenarioError("exponent.z_grid[" + std::to_string(k) + "]", "must be >= 0");
        }
    }

    for (int e = 0; e <= 20; ++e) s.sweep_levels.push_back(std::ldexp(1.0, e));
    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        if (sw.contains("levels")) s.sweep_levels = number_list(sw.at("levels"), "sweep.levels");
        s.sweep_paths = opt_uint(sw, "n_paths", "sweep", 1);
    }

    s.price_times = {0.0, s.t_star};
    s.price_maturities.clear();
    for (double T = 0.0; T <= s.t_star + s.x_max + 1e-12; T += 0.25) s.price_maturities.push_back(T);
    if (j.contains("price")) {
        const json& pr = j.at("price");
        if (pr.contains("times")) s.price_times = number_list(pr.at("times"), "price.times");
        if (pr.contains("maturities")) s.price_maturities = number_list(pr.at("maturities"), "price.maturities");
    }

    s.mc_checkpoints = {0.0, 0.5 * s.t_star, s.t_star};
    s.mc_maturities = {s.t_star};
    if (j.contains("martingale")) {
        const json& mc = j.at("martingale");
        s.mc_paths = opt_uint(mc, "n_paths", "martingale", 1000);
        if (mc.contains("checkpoints")) s.mc_checkpoints = number_list(mc.at("checkpoints"), "martingale.checkpoints");
        if (mc.contains("maturities")) s.mc_maturities = number_list(mc.at("maturities"), "martingale.maturities");
    }
    return s;
}

Scenario load_scenario(const std::string& path, const Overrides& ov) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path, "cannot open scenario file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path, std::string("invalid JSON: ") + e.what());
    }
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_scenario(j, ov, base.empty() ? "." : base);
}

std::string scenario_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace hjmm
