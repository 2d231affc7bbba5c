#include "hjmm/bond_market.hpp"

#include "hjmm/kernels.hpp"
#include "hjmm/path_sim.hpp"
#include "hjmm/random_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hjmm {

namespace {

std::size_t grid_index(double v, double h, const char* what) {
    const double k = std::round(v / h);
    if (k < 0.0 || std::abs(k * h - v) > 1e-9 * h) {
        throw std::invalid_argument(std::string(what) + " is not on the grid");
    }
    return static_cast<std::size_t>(k);
}

double trapezoid_prefix(std::span<const double> v, std::size_t n, double h) {
    if (n == 0) return 0.0;
    double s = 0.5 * (v[0] + v[n]);
    for (std::size_t k = 1; k < n; ++k) s += v[k];
    return s * h;
}

}  // namespace

NaturalField::NaturalField(const Grid& g)
    : grid_(g), data_((g.nt + 1) * (g.N() + 1), std::numeric_limits<double>::quiet_NaN()) {}

double NaturalField::at(std::size_t i, std::size_t j) const {
    if (j < i) throw std::invalid_argument("natural frame: maturity before time");
    return raw(i, j);
}

NaturalField to_natural_frame(const Field& r) {
    const Grid& g = r.grid();
    NaturalField f(g);
    for (std::size_t i = 0; i <= g.nt; ++i) {
        for (std::size_t x = 0; x < g.extent(i); ++x) f.raw(i, i + x) = r(i, x);
    }
    return f;
}

Field to_moving_frame(const NaturalField& f) {
    const Grid& g = f.grid();
    Field r(g);
    for (std::size_t i = 0; i <= g.nt; ++i) {
        for (std::size_t x = 0; x < g.extent(i); ++x) r(i, x) = f.raw(i, i + x);
    }
    return r;
}

double bond_price(const Field& r, double t, double T) {
    if (T < t) throw std::invalid_argument("bond_price: T < t");
    const Grid& g = r.grid();
    const std::size_t i = grid_index(t, g.h, "bond_price: t");
    const std::size_t n = grid_index(T - t, g.h, "bond_price: T - t");
    if (i > g.nt || n >= g.extent(i)) throw std::invalid_argument("bond_price: outside the grid");
    return std::exp(-trapezoid_prefix(r.row(i), n, g.h));
}

double bond_price(const WeightedCurve& curve, double tau) {
    if (tau < 0.0) throw std::invalid_argument("bond_price: negative time to maturity");
    const std::size_t n = grid_index(tau, curve.dx, "bond_price: tau");
    if (curve.x0 != 0.0 || n >= curve.size()) throw std::invalid_argument("bond_price: outside the curve");
    return std::exp(-trapezoid_prefix(curve.values, n, curve.dx));
}

double short_rate(const Field& r, double t) {
    const std::size_t i = grid_index(t, r.grid().h, "short_rate: t");
    if (i > r.grid().nt) throw std::invalid_argument("short_rate: t beyond the grid");
    return r(i, 0);
}

BoundCheck bond_lower_bound_check(const Field& r, double t, double gamma) {
    const Grid& g = r.grid();
    const std::size_t i = grid_index(t, g.h, "bound: t");
    const auto row = r.row(i);
    const WeightedCurve c(0.0, g.h, std::vector<double>(row.begin(), row.end()), gamma);
    BoundCheck b;
    b.lhs = std::exp(-trapezoid_prefix(row, row.size() - 1, g.h));
    b.rhs = std::exp(-norm_l2gamma(c) / std::sqrt(gamma));
    b.holds = b.lhs >= b.rhs * (1.0 - 1e-6);
    return b;
}

std::vector<HjmRow> hjm_drift_check(const Field& r, const Volatility& vol, const LevyModel& model, double t) {
    const Grid& g = r.grid();
    const std::size_t i = grid_index(t, g.h, "hjm_drift_check: t");
    if (i > g.nt) throw std::invalid_argument("hjm_drift_check: t beyond the grid");
    const auto row = r.row(i);
    const std::size_t n = g.nx + 1;
    std::vector<double> sigma(n), alpha(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = vol(g.x(j)) * row[j];

    std::vector<HjmRow> out(n);
    double big_sigma = 0.0, drift = 0.0;
    bool alpha_ok = true;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) big_sigma += 0.5 * g.h * (sigma[j - 1] + sigma[j]);
        const double jp = eval_J_prime(model, big_sigma);
        alpha[j] = jp * sigma[j];
        if (!std::isfinite(alpha[j])) alpha_ok = false;
        if (j > 0) drift += 0.5 * g.h * (alpha[j - 1] + alpha[j]);
        HjmRow& o = out[j];
        o.T = t + g.x(j);
        o.drift_integral = drift;
        o.exponent = eval_J(model, big_sigma);
        o.ok = alpha_ok && std::isfinite(o.exponent);
        o.residual = o.ok ? std::abs(o.drift_integral - o.exponent) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

MartingaleReport martingale_mc(const LevyModel& model, const Volatility& vol, const WeightedCurve& r0,
                               const MartingaleConfig& cfg) {
    const Grid g = Grid::make(cfg.t_star, cfg.x_max, cfg.h);
    if (r0.x0 != 0.0 || std::abs(r0.dx - g.h) > 1e-15 * g.h || r0.size() < g.N() + 1) {
        throw std::invalid_argument("martingale_mc: r0 must be sampled on the grid up to t* + x_max");
    }
    struct Pair {
        std::size_t i, n;
        double t, T;
    };
    std::vector<Pair> pairs;
    for (double t : cfg.checkpoints) {
        for (double T : cfg.maturities) {
            if (T < t) continue;
            const std::size_t i = grid_index(t, g.h, "martingale_mc: checkpoint");
            const std::size_t n = grid_index(T - t, g.h, "martingale_mc: maturity");
            if (i > g.nt || n > g.nx) throw std::invalid_argument("martingale_mc: (t, T) outside the grid");
            pairs.push_back({i, n, t, T});
        }
    }

    SimConfig sim;
    sim.t_star = cfg.t_star;
    sim.dt = cfg.h;
    sim.n_threshold = cfg.n_threshold;
    sim.seed = cfg.seed;
    sim.max_jumps = cfg.max_jumps;

    // 0 converged, 1 exploded, 2 max iter
    std::vector<int> status(cfg.n_paths, 0);
    std::vector<double> values(cfg.n_paths * pairs.size(), 0.0);
    auto work = [&](std::size_t begin, std::size_t end) {
        JPrimeTable jp(model);
        for (std::size_t p = begin; p < end; ++p) {
            const LevyPathRecord path = simulate(model, sim, p);
            const RandomFactorField f = compute_a(path, vol, r0, model.q, g);
            const SolveReport rep = solve_monotone(f, vol, jp, cfg.solver);
            if (rep.status != SolveStatus::Converged) {
                status[p] = rep.status == SolveStatus::ExplosionDetected ? 1 : 2;
                continue;
            }
            std::vector<double> v(g.nt + 1);
            for (std::size_t k = 0; k <= g.nt; ++k) v[k] = rep.r(k, 0);
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                const Pair& pr = pairs[q];
                const double disc = trapezoid_prefix(v, pr.i, g.h);
                const double y = trapezoid_prefix(rep.r.row(pr.i), pr.n, g.h);
                values[p * pairs.size() + q] = std::exp(-disc - y);
            }
        }
    };
    unsigned nth = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nth = static_cast<unsigned>(std::min<std::size_t>(nth, std::max<std::size_t>(cfg.n_paths, 1)));
    if (nth <= 1) {
        work(0, cfg.n_paths);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nth);
        const std::size_t chunk = (cfg.n_paths + nth - 1) / nth;
        for (unsigned k = 0; k < nth; ++k) {
            const std::size_t b = std::min(cfg.n_paths, k * chunk);
            const std::size_t e = std::min(cfg.n_paths, b + chunk);
            pool.emplace_back([&, b, e, k] {
                try {
                    work(b, e);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    MartingaleReport rep;
    for (int s : status) {
        if (s == 0) ++rep.n_used;
        if (s == 1) ++rep.n_exploded;
        if (s == 2) ++rep.n_not_converged;
    }
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        MartingaleRow row;
        row.t = pairs[q].t;
        row.T = pairs[q].T;
        row.p0 = std::exp(-trapezoid_prefix(r0.values, pairs[q].i + pairs[q].n, g.h));
        if (rep.n_used > 0) {
            const double n = static_cast<double>(rep.n_used);
            double s = 0.0;
            for (std::size_t p = 0; p < cfg.n_paths; ++p) {
                if (status[p] == 0) s += values[p * pairs.size() + q];
            }
            row.mean = s / n;
            double ss = 0.0;
            for (std::size_t p = 0; p < cfg.n_paths; ++p) {
                if (status[p] != 0) continue;
                const double d = values[p * pairs.size() + q] - row.mean;
                ss += d * d;
            }
            row.se = rep.n_used > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        }
        row.gap = row.mean - row.p0;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace hjmm
