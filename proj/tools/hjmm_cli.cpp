// hjmm: scenario-driven experiments for the linear HJMM equation.
//
//   hjmm <subcommand> scenario.json [--out-dir DIR] [--seed N] [--grid-dt H]
//        [--tol T] [--max-iter N] [--cap C]
//
// Exit codes: 0 ok, 1 other failure, 2 schema error, 3 exponent-domain
// error, 4 explosion in `solve`.

#include "hjmm/bond_market.hpp"
#include "hjmm/hjmm_solver.hpp"
#include "hjmm/levy_analysis.hpp"
#include "hjmm/path_sim.hpp"
#include "hjmm/random_factor.hpp"
#include "hjmm/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace hjmm;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitSchema = 2;
constexpr int kExitDomain = 3;
constexpr int kExitExplosion = 4;

struct Context {
    Scenario sc;
    std::string hash;
    std::filesystem::path out_dir;
};

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json num_list(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json meta(const Context& c) {
    return {{"scenario_hash", c.hash},
            {"seed", c.sc.seed},
            {"version", HJMM_VERSION},
            {"rng", std::string(rng_algorithm_id())}};
}

std::ofstream open_out(const Context& c, const std::string& name) {
    std::filesystem::create_directories(c.out_dir);
    std::ofstream os(c.out_dir / name);
    if (!os) throw std::runtime_error("cannot write " + (c.out_dir / name).string());
    return os;
}

std::ofstream open_csv(const Context& c, const std::string& name) {
    std::ofstream os = open_out(c, name);
    os << "# scenario=" << c.hash << " seed=" << c.sc.seed << " version=" << HJMM_VERSION
       << " rng=" << rng_algorithm_id() << '\n';
    return os;
}

void write_json(const Context& c, const std::string& name, const json& j) {
    std::ofstream os = open_out(c, name);
    os << j.dump(2) << '\n';
}

int report_exponent(const Context& c) {
    std::ofstream os = open_csv(c, "exponent.csv");
    os << "z,J,J_prime,J_second\n" << std::setprecision(17);
    for (double z : c.sc.z_grid) {
        os << z << ',' << eval_J(c.sc.model, z) << ',' << eval_J_prime(c.sc.model, z) << ','
           << eval_J_second(c.sc.model, z) << '\n';
    }
    return 0;
}

int classify_cmd(const Context& c) {
    const Volatility vol = c.sc.volatility();
    ConditionContext ctx;
    ctx.z0 = c.sc.z0;
    const ExponentReport rep = classify(c.sc.model, c.sc.z_grid, ctx, vol.lambda_bar() * c.sc.t_star);
    json flags = json::object();
    for (const auto& [k, v] : rep.flags) flags[k] = std::string(to_string(v));
    json values = json::array();
    for (const ExponentRow& r : rep.values) values.push_back({num(r.z), num(r.J), num(r.J_prime), num(r.J_second)});
    json out = {{"meta", meta(c)},
                {"regime", std::string(to_string(rep.regime))},
                {"regime_basis", rep.regime_basis},
                {"flags", flags},
                {"domain_sup", num(rep.domain_sup)},
                {"z0", rep.z0},
                {"lambda_bar_t_star", rep.lambda_bar_t_star ? num(*rep.lambda_bar_t_star) : json(nullptr)},
                {"rho_fit",
                 {{"available", rep.rho.available},
                  {"rho", num(rep.rho.rho)},
                  {"rms_residual", num(rep.rho.rms_residual)},
                  {"good", rep.rho.good},
                  {"n_points", rep.rho.n_points}}},
                {"positivity_linear", check_positivity_linear(c.sc.model, vol.lambda_bar())},
                {"values_columns", {"z", "J", "J_prime", "J_second"}},
                {"values", values}};
    write_json(c, "classify.json", out);
    std::cout << to_string(rep.regime) << '\n';
    return 0;
}

int simulate_path_cmd(const Context& c, bool dump_factor) {
    const LevyPathRecord p = simulate(c.sc.model, c.sc.sim_config());
    {
        std::ofstream os = open_csv(c, "path.csv");
        os << "t,L\n" << std::setprecision(17);
        for (std::size_t i = 0; i <= p.steps(); ++i) os << static_cast<double>(i) * p.dt << ',' << p.grid_values[i] << '\n';
        json jumps = json::array();
        for (const Jump& j : p.jumps) jumps.push_back({j.time, j.size});
        os << "# jumps: " << jumps.dump() << '\n';
        os << "# compensator: " << num(p.compensator).dump() << " threshold: " << num(p.threshold).dump() << '\n';
    }
    if (dump_factor) {
        const RandomFactorField f = compute_a(p, c.sc.volatility(), c.sc.r0_curve(), c.sc.model.q, c.sc.grid());
        std::ofstream os = open_csv(c, "factor.csv");
        write_factor_csv(os, f);
    }
    return 0;
}

int solve_cmd(const Context& c) {
    const Volatility vol = c.sc.volatility();
    const WeightedCurve r0 = c.sc.r0_curve();
    const Grid g = c.sc.grid();
    const LevyPathRecord path = simulate(c.sc.model, c.sc.sim_config());
    const RandomFactorField f = compute_a(path, vol, r0, c.sc.model.q, g);
    JPrimeTable jp(c.sc.model);
    SolveReport rep = solve_monotone(f, vol, jp, c.sc.solver);

    json residuals = json::object();
    if (rep.status == SolveStatus::Converged) {
        rep.mild_residuals = mild_residual(rep, path, f, vol, c.sc.model, r0);
        residuals["mild_l2gamma"] = num_list(rep.mild_residuals);
        const bool positive = std::all_of(r0.values.begin(), r0.values.end(), [](double v) { return v > 0.0; });
        if (vol.is_constant() && positive) {
            const StrongResidual sr = strong_residual(rep, r0, vol, c.sc.model);
            rep.strong_residuals = sr.l2;
            residuals["strong_sup"] = num(sr.sup);
            residuals["strong_l2gamma"] = num_list(sr.l2);
        }
        std::ofstream os = open_csv(c, "field.csv");
        write_field_csv(os, rep.r);
    }
    json cfg = {{"tol", c.sc.solver.tol},
                {"max_iter", c.sc.solver.max_iter},
                {"cap", num(rep.cap)},
                {"gamma", c.sc.solver.gamma},
                {"grid", {{"t_star", c.sc.t_star}, {"dt", c.sc.dt}, {"x_max", c.sc.x_max}}}};
    json out = {{"meta", meta(c)},
                {"status", std::string(to_string(rep.status))},
                {"rule", rep.rule},
                {"n_iters", rep.n_iters},
                {"last_change", num(rep.last_change)},
                {"iterate_sup_norms", num_list(rep.iterate_sup_norms)},
                {"iterate_l2gamma_norms", num_list(rep.iterate_l2_norms)},
                {"c1", rep.c1 ? num(*rep.c1) : json(nullptr)},
                {"b_bar", num(f.b_bar)},
                {"positivity_ok", f.positivity_ok},
                {"n_jumps", path.jumps.size()},
                {"residuals", residuals},
                {"config", cfg}};
    write_json(c, "solve_report.json", out);
    std::cout << to_string(rep.status) << ' ' << rep.n_iters << '\n';
    return rep.status == SolveStatus::ExplosionDetected ? kExitExplosion : 0;
}

int sweep_cmd(const Context& c) {
    SweepConfig sw;
    sw.t_star = c.sc.t_star;
    sw.x_max = c.sc.x_max;
    sw.h = c.sc.dt;
    sw.n_threshold = c.sc.n_threshold;
    sw.max_jumps = c.sc.max_jumps;
    sw.seed = c.sc.seed;
    sw.n_paths = c.sc.sweep_paths;
    const auto rows = explosion_sweep(c.sc.model, c.sc.volatility(), c.sc.sweep_levels, sw, c.sc.solver);
    {
        std::ofstream os = open_csv(c, "sweep.csv");
        os << "k,path,status,n_iters,max_sup,rule\n" << std::setprecision(17);
        for (const SweepRow& r : rows) {
            os << r.k << ',' << r.path_index << ',' << to_string(r.status) << ',' << r.n_iters << ',' << r.max_sup << ','
               << r.rule << '\n';
        }
    }
    const auto k = explosion_threshold(rows);
    write_json(c, "sweep.json",
               {{"meta", meta(c)},
                {"levels", num_list(c.sc.sweep_levels)},
                {"n_paths", c.sc.sweep_paths},
                {"smallest_exploding_k", k ? num(*k) : json(nullptr)}});
    std::cout << (k ? "explosion at k=" + json(*k).dump() : std::string("no explosion")) << '\n';
    return 0;
}

int price_cmd(const Context& c) {
    const Volatility vol = c.sc.volatility();
    const Grid g = c.sc.grid();
    const LevyPathRecord path = simulate(c.sc.model, c.sc.sim_config());
    const RandomFactorField f = compute_a(path, vol, c.sc.r0_curve(), c.sc.model.q, g);
    JPrimeTable jp(c.sc.model);
    const SolveReport rep = solve_monotone(f, vol, jp, c.sc.solver);
    if (rep.status != SolveStatus::Converged) {
        std::cerr << "price: solve ended with " << to_string(rep.status) << '\n';
        return kExitFailure;
    }
    std::ofstream os = open_csv(c, "prices.csv");
    os << "t,T,price\n" << std::setprecision(17);
    for (double t : c.sc.price_times) {
        for (double T : c.sc.price_maturities) {
            if (t > g.t_star() + 1e-12 || T < t || T > g.x(g.N()) + 1e-12) continue;
            os << t << ',' << T << ',' << bond_price(rep.r, t, T) << '\n';
        }
    }
    return 0;
}

int martingale_cmd(const Context& c) {
    MartingaleConfig mc;
    mc.t_star = c.sc.t_star;
    mc.x_max = c.sc.x_max;
    mc.h = c.sc.dt;
    mc.gamma = c.sc.gamma;
    mc.n_threshold = c.sc.n_threshold;
    mc.max_jumps = c.sc.max_jumps;
    mc.seed = c.sc.seed;
    mc.n_paths = c.sc.mc_paths;
    mc.checkpoints = c.sc.mc_checkpoints;
    mc.maturities = c.sc.mc_maturities;
    mc.solver = c.sc.solver;
    const MartingaleReport rep = martingale_mc(c.sc.model, c.sc.volatility(), c.sc.r0_curve(), mc);
    json rows = json::array();
    for (const MartingaleRow& r : rep.rows) {
        rows.push_back({{"t", r.t}, {"T", r.T}, {"p0", num(r.p0)}, {"mean", num(r.mean)}, {"se", num(r.se)},
                        {"gap", num(r.gap)}, {"within_3se_plus_10dt", std::abs(r.gap) < 3 * r.se + 10 * mc.h}});
    }
    write_json(c, "martingale.json",
               {{"meta", meta(c)},
                {"property", rep.property},
                {"n_paths", mc.n_paths},
                {"n_used", rep.n_used},
                {"n_exploded", rep.n_exploded},
                {"n_not_converged", rep.n_not_converged},
                {"rows", rows}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for the linear HJMM equation with Levy noise"};
    app.require_subcommand(1);
    std::string scenario_path;
    std::string out_dir = "out";
    Overrides ov;
    std::uint64_t seed = 0;
    double dt = 0.0, tol = 0.0, cap = 0.0;
    int max_iter = 0;
    bool dump_factor = false;

    const std::vector<std::string> names = {"report-exponent", "classify", "simulate-path", "solve",
                                            "sweep-explosion", "price", "check-martingale"};
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> o_seed, o_dt, o_tol, o_iter, o_cap;
    for (const std::string& n : names) {
        CLI::App* s = app.add_subcommand(n);
        s->add_option("scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
        s->add_option("--out-dir", out_dir, "output directory");
        o_seed.push_back(s->add_option("--seed", seed));
        o_dt.push_back(s->add_option("--grid-dt", dt));
        o_tol.push_back(s->add_option("--tol", tol));
        o_iter.push_back(s->add_option("--max-iter", max_iter));
        o_cap.push_back(s->add_option("--cap", cap));
        if (n == "simulate-path") s->add_flag("--dump-factor", dump_factor, "also write the random factor field");
        subs.push_back(s);
    }
    CLI11_PARSE(app, argc, argv);

    std::size_t which = 0;
    for (std::size_t k = 0; k < subs.size(); ++k) {
        if (subs[k]->parsed()) which = k;
    }
    if (o_seed[which]->count() > 0) ov.seed = seed;
    if (o_dt[which]->count() > 0) ov.dt = dt;
    if (o_tol[which]->count() > 0) ov.tol = tol;
    if (o_iter[which]->count() > 0) ov.max_iter = max_iter;
    if (o_cap[which]->count() > 0) ov.cap = cap;

    try {
        Context c{load_scenario(scenario_path, ov), "", out_dir};
        c.hash = scenario_hash(c.sc.source);
        switch (which) {
        case 0: return report_exponent(c);
        case 1: return classify_cmd(c);
        case 2: return simulate_path_cmd(c, dump_factor);
        case 3: return solve_cmd(c);
        case 4: return sweep_cmd(c);
        case 5: return price_cmd(c);
        default: return martingale_cmd(c);
        }
    } catch (const ScenarioError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const ExponentDomainError& e) {
        std::cerr << "exponent domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
