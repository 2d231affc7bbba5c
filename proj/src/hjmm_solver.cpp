#include "hjmm/hjmm_solver.hpp"

#include "hjmm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace hjmm {

namespace {

std::vector<double> lambda_on_grid(const Volatility& vol, const Grid& g) {
    std::vector<double> v(g.N() + 1);
    for (std::size_t m = 0; m <= g.N(); ++m) v[m] = vol(g.x(m));
    return v;
}

// trapezoid weights times e^{gamma x} on 0..N
std::vector<double> l2_weights(const Grid& g, double gamma) {
    std::vector<double> w(g.N() + 1);
    for (std::size_t m = 0; m <= g.N(); ++m) w[m] = g.h * std::exp(gamma * g.x(m));
    return w;
}

double row_norm(std::span<const double> v, const std::vector<double>& w) {
    if (v.size() < 2) return 0.0;
    double s = kernels::weighted_sum_squares(v, std::span<const double>(w.data(), v.size()));
    s -= 0.5 * (w[0] * v[0] * v[0] + w[v.size() - 1] * v.back() * v.back());
    return std::sqrt(std::max(s, 0.0));
}

// out[m] = int_0^{x_m} f, trapezoid
void cumulative_trapezoid(std::span<const double> f, double h, std::vector<double>& out) {
    out.resize(f.size());
    if (f.empty()) return;
    out[0] = 0.0;
    for (std::size_t m = 1; m < f.size(); ++m) out[m] = out[m - 1] + 0.5 * h * (f[m - 1] + f[m]);
}

double checked_J_prime(JPrimeTable& jp, double z) {
    const double v = jp(z);
    if (!std::isfinite(v)) throw ExponentDomainError("J' is not finite at z = " + std::to_string(z), z);
    return v;
}

}  // namespace

std::string_view to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::ExplosionDetected: return "ExplosionDetected";
    case SolveStatus::MaxIterReached: return "MaxIterReached";
    }
    return "?";
}

double sup_row_norm_l2gamma(const Field& h, double gamma) {
    const Grid& g = h.grid();
    const std::vector<double> w = l2_weights(g, gamma);
    double m = 0.0;
    for (std::size_t i = 0; i <= g.nt; ++i) m = std::max(m, row_norm(h.row(i), w));
    return m;
}

Field apply_K(const Field& h, const RandomFactorField& factor, const Volatility& vol, JPrimeTable& jp) {
    const Grid& g = factor.grid;
    if (!(h.grid() == g)) throw std::invalid_argument("apply_K: field and factor grids differ");
    const std::size_t N = g.N();
    const double dx = g.h;
    const std::vector<double> lam = lambda_on_grid(vol, g);

    Field out(g);
    std::vector<double> P(N + 1, 0.0);  // anti-diagonal sums of G(k, d - k)
    std::vector<double> G0(N + 1);
    std::vector<double> G(N + 1), lh(N + 1), Lam;
    for (std::size_t i = 0; i <= g.nt; ++i) {
        const auto hi = h.row(i);
        const std::size_t len = hi.size();
        kernels::multiply(std::span<double>(lh.data(), len), std::span<const double>(lam.data(), len), hi);
        cumulative_trapezoid(std::span<const double>(lh.data(), len), dx, Lam);
        for (std::size_t m = 0; m < len; ++m) G[m] = checked_J_prime(jp, Lam[m]) * lam[m];
        if (i == 0) std::copy(G.begin(), G.begin() + static_cast<std::ptrdiff_t>(len), G0.begin());
        kernels::add_inplace(std::span<double>(P.data() + i, len), std::span<const double>(G.data(), len));

        const auto a = factor.a.row(i);
        auto o = out.row(i);
        if (i == 0) {
            std::copy(a.begin(), a.end(), o.begin());
            continue;
        }
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t d = i + j;
            const double e = dx * (P[d] - 0.5 * G0[d] - 0.5 * G[j]);
            o[j] = a[j] * std::exp(e);
        }
    }
    return out;
}

std::optional<double> a_priori_c1(double b_bar, double r0_norm, double lambda_bar, double t_star, double gamma,
                                  const LevyModel& model) {
    const double base = b_bar * r0_norm;
    if (!(base > 0.0)) return base == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    const double lb = std::log(base);
    for (int k = 0;; ++k) {
        const double c = base * std::pow(10.0, k / 60.0);
        if (c > 1e12 * (1.0 + 1e-12)) break;
        const double jp = eval_J_prime(model, lambda_bar * c / std::sqrt(gamma));
        if (std::isnan(jp) || jp == kInf) continue;
        if (lb + lambda_bar * t_star * jp <= std::log(c)) return c;
    }
    return std::nullopt;
}

SolveReport solve_monotone(const RandomFactorField& factor, const Volatility& vol, JPrimeTable& jp,
                           const SolverConfig& cfg, const SolveOptions& opt) {
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || !(cfg.gamma > 0.0)) {
        throw std::invalid_argument("solve: tol, max_iter and gamma must be positive");
    }
    const Grid& g = factor.grid;
    const double sup_r0 = kernels::max_abs(std::span<const double>(factor.r0.values.data(), g.N() + 1));
    SolveReport rep;
    rep.cap = cfg.cap > 0.0 ? cfg.cap : 1e8 * (1.0 + sup_r0);
    if (!(rep.cap > sup_r0)) throw std::invalid_argument("solve: cap must exceed sup r0");

    WeightedCurve r0_used(0.0, g.h,
                          std::vector<double>(factor.r0.values.begin(),
                                              factor.r0.values.begin() + static_cast<std::ptrdiff_t>(g.N() + 1)),
                          cfg.gamma);
    rep.c1 = a_priori_c1(factor.b_bar, norm_l2gamma(r0_used), vol.lambda_bar(), g.t_star(), cfg.gamma,
                         jp.model());

    // fail fast where the iteration will read J'
    const double probe = rep.c1 ? vol.lambda_bar() * *rep.c1 / std::sqrt(cfg.gamma)
                                : vol.lambda_bar() * rep.cap * g.x(g.N());
    const double jprobe = eval_J_prime(jp.model(), probe);
    if (!std::isfinite(jprobe)) {
        throw ExponentDomainError("J' is not finite at the probe z = " + std::to_string(probe), probe);
    }

    Field h = opt.h0 != nullptr ? *opt.h0 : Field(g, 0.0);
    if (!(h.grid() == g)) throw std::invalid_argument("solve: h0 grid differs from the factor grid");
    double prev_sup = h.sup_norm();
    int streak = 0;
    for (int n = 1; n <= cfg.max_iter; ++n) {
        Field next = apply_K(h, factor, vol, jp);
        const double sup = next.sup_norm();
        rep.iterate_sup_norms.push_back(sup);
        rep.iterate_l2_norms.push_back(sup_row_norm_l2gamma(next, cfg.gamma));
        rep.n_iters = n;
        if (opt.observer) opt.observer(n, next);

        if (!std::isfinite(sup)) {
            rep.status = SolveStatus::ExplosionDetected;
            rep.rule = "non-finite iterate";
            rep.r = std::move(next);
            return rep;
        }
        if (sup > rep.cap) {
            rep.status = SolveStatus::ExplosionDetected;
            rep.rule = "sup above cap";
            rep.r = std::move(next);
            return rep;
        }
        streak = (prev_sup > 0.0 && sup > 10.0 * prev_sup) ? streak + 1 : 0;
        if (streak >= 3) {
            rep.status = SolveStatus::ExplosionDetected;
            rep.rule = "growth x10 three times";
            rep.r = std::move(next);
            return rep;
        }
        rep.last_change = sup_distance(next, h);
        h = std::move(next);
        prev_sup = sup;
        if (rep.last_change <= cfg.tol * sup) {
            rep.status = SolveStatus::Converged;
            rep.rule = "relative change below tol";
            rep.r = std::move(h);
            return rep;
        }
    }
    rep.status = SolveStatus::MaxIterReached;
    rep.rule = "max_iter";
    rep.r = std::move(h);
    return rep;
}

std::vector<double> mild_residual(const SolveReport& report, const LevyPathRecord& path,
                                  const RandomFactorField& factor, const Volatility& vol, const LevyModel& model,
                                  const WeightedCurve& r0) {
    if (report.status != SolveStatus::Converged) throw std::logic_error("mild_residual: report did not converge");
    const Field& r = report.r;
    const Grid& g = r.grid();
    if (!(factor.grid == g) || path.dt != g.h || path.steps() != g.nt) {
        throw std::invalid_argument("mild_residual: grids differ");
    }
    if (r0.x0 != 0.0 || std::abs(r0.dx - g.h) > 1e-15 * g.h || r0.size() < g.N() + 1) {
        throw std::invalid_argument("mild_residual: r0 must be sampled on the field grid up to t* + x_max");
    }
    const std::size_t N = g.N();
    const double dx = g.h;
    const std::vector<double> lam = lambda_on_grid(vol, g);
    const std::vector<double> w = l2_weights(g, r0.gamma);
    JPrimeTable jp(model);

    std::vector<double> lc(g.nt + 1);
    for (std::size_t k = 0; k <= g.nt; ++k) lc[k] = path.continuous_at(g.t(k));

    // jump factor 1 + lambda(z) y at the characteristic position z, by jump
    auto factor_at = [&](const Jump& jmp, double z) { return 1.0 + vol(z) * jmp.size; };

    std::vector<double> P(N + 1, 0.0);  // left-point sums over k < i
    std::vector<double> G(N + 1), lr(N + 1), Lam, rhs(N + 1);
    std::vector<double> out(g.nt + 1, 0.0);
    const double grid_tol = 1e-9 * dx;
    for (std::size_t i = 0; i <= g.nt; ++i) {
        const auto ri = r.row(i);
        const std::size_t len = ri.size();
        const double t = g.t(i);
        for (std::size_t j = 0; j < len; ++j) rhs[j] = r0.values[i + j] + P[i + j];

        for (std::size_t l = 0; l < path.jumps.size(); ++l) {
            const Jump& jmp = path.jumps[l];
            if (jmp.time > t + grid_tol) break;
            const double kf = std::floor(jmp.time / dx + 1e-9);
            const std::size_t k = static_cast<std::size_t>(kf);
            const bool on_grid = std::abs(jmp.time - kf * dx) <= grid_tol;
            for (std::size_t j = 0; j < len; ++j) {
                const double z = t - jmp.time + g.x(j);  // position at time s in the moving frame
                double left = r(k, i - k + j);
                if (on_grid) {
                    // undo this jump and the later ones at the same instant
                    for (std::size_t m = l; m < path.jumps.size() && path.jumps[m].time <= jmp.time; ++m) {
                        left /= factor_at(path.jumps[m], z);
                    }
                } else {
                    // carry r(t_k) along the characteristic through earlier jumps in (t_k, s)
                    for (std::size_t m = 0; m < l; ++m) {
                        if (path.jumps[m].time > kf * dx + grid_tol) {
                            left *= factor_at(path.jumps[m], t - path.jumps[m].time + g.x(j));
                        }
                    }
                }
                rhs[j] += vol(z) * left * jmp.size;
            }
        }

        std::vector<double> diff(len);
        for (std::size_t j = 0; j < len; ++j) diff[j] = ri[j] - rhs[j];
        out[i] = row_norm(std::span<const double>(diff.data(), g.nx + 1), w);

        if (i == g.nt) break;
        kernels::multiply(std::span<double>(lr.data(), len), std::span<const double>(lam.data(), len), ri);
        cumulative_trapezoid(std::span<const double>(lr.data(), len), dx, Lam);
        const double dl = lc[i + 1] - lc[i];
        for (std::size_t m = 0; m < len; ++m) G[m] = lr[m] * (dx * checked_J_prime(jp, Lam[m]) + dl);
        kernels::add_inplace(std::span<double>(P.data() + i, len), std::span<const double>(G.data(), len));
    }
    return out;
}

StrongResidual strong_residual(const SolveReport& report, const WeightedCurve& r0, const Volatility& vol,
                               const LevyModel& model) {
    if (report.status != SolveStatus::Converged) throw std::logic_error("strong_residual: report did not converge");
    if (!vol.is_constant()) throw std::invalid_argument("strong_residual: only constant lambda is supported");
    const Field& r = report.r;
    const Grid& g = r.grid();
    if (r0.x0 != 0.0 || std::abs(r0.dx - g.h) > 1e-15 * g.h || r0.size() < g.N() + 1) {
        throw std::invalid_argument("strong_residual: r0 must be sampled on the field grid up to t* + x_max");
    }
    for (std::size_t m = 0; m <= g.N(); ++m) {
        if (!(r0.values[m] > 0.0)) throw std::invalid_argument("strong_residual: r0 must be strictly positive");
    }
    const std::size_t N = g.N();
    const double dx = g.h;
    const double lambda = vol(0.0);
    const std::vector<double> w = l2_weights(g, r0.gamma);
    WeightedCurve r0g(0.0, dx, std::vector<double>(r0.values.begin(), r0.values.begin() + static_cast<std::ptrdiff_t>(N + 1)),
                      r0.gamma);
    const std::vector<double> dr0 = derivative(r0g);

    StrongResidual res;
    res.l2.assign(g.nt + 1, 0.0);
    std::vector<double> P(N + 1, 0.0), G0(N + 1), G(N + 1), Lam;
    std::vector<double> diff(g.nx + 1);
    for (std::size_t i = 0; i <= g.nt; ++i) {
        const auto ri = r.row(i);
        const std::size_t len = ri.size();
        cumulative_trapezoid(ri, dx, Lam);
        for (std::size_t m = 0; m < len; ++m) G[m] = eval_J_second(model, lambda * Lam[m]) * ri[m];
        if (i == 0) std::copy(G.begin(), G.begin() + static_cast<std::ptrdiff_t>(len), G0.begin());
        kernels::add_inplace(std::span<double>(P.data() + i, len), std::span<const double>(G.data(), len));

        WeightedCurve row(0.0, dx, std::vector<double>(ri.begin(), ri.end()), r0.gamma);
        const std::vector<double> dr = derivative(row);
        for (std::size_t j = 0; j <= g.nx; ++j) {
            const std::size_t d = i + j;
            const double integral = i == 0 ? 0.0 : dx * (P[d] - 0.5 * G0[d] - 0.5 * G[j]);
            const double rhs = ri[j] * (dr0[d] / r0.values[d] + lambda * lambda * integral);
            diff[j] = dr[j] - rhs;
            res.sup = std::max(res.sup, std::abs(diff[j]));
        }
        res.l2[i] = row_norm(diff, w);
    }
    return res;
}

GronwallResult gronwall_check(const Field& d, double C, double abs_tol) {
    const Grid& g = d.grid();
    for (double v : d.flat()) {
        if (!(v >= 0.0)) throw std::invalid_argument("gronwall_check: d must be nonnegative");
    }
    if (!(C >= 0.0)) throw std::invalid_argument("gronwall_check: C must be nonnegative");
    const std::size_t N = g.N();
    const double dx = g.h;
    constexpr int n = 10;
    double nfact = 1.0;
    for (int k = 2; k <= n; ++k) nfact *= k;

    GronwallResult res;
    res.sup_d = d.sup_norm();
    std::vector<double> P(N + 1, 0.0), D0, D;
    for (std::size_t i = 0; i <= g.nt; ++i) {
        const auto di = d.row(i);
        cumulative_trapezoid(di, dx, D);
        if (i == 0) D0 = D;
        kernels::add_inplace(std::span<double>(P.data() + i, di.size()), std::span<const double>(D.data(), di.size()));
        const double t = g.t(i);
        for (std::size_t j = 0; j <= g.nx; ++j) {
            const std::size_t m = i + j;
            const double dbl = i == 0 ? 0.0 : dx * (P[m] - 0.5 * D0[m] - 0.5 * D[j]);
            const double excess = di[j] - C * dbl;
            res.worst_excess = std::max(res.worst_excess, excess);
            if (excess > abs_tol) res.holds = false;
            const double bound = res.sup_d * std::pow(C * t * (t + g.x(j)), n) / (nfact * nfact);
            res.zero_within = std::max(res.zero_within, bound);
            if (di[j] > bound + abs_tol) res.within_bound = false;
        }
    }
    if (!res.holds) res.within_bound = false;
    return res;
}

double uniqueness_constant(double sup_r0, double b_bar, double lambda_bar, double t_star, double gamma,
                           const LevyModel& model, double norm1, double norm2) {
    const double zmax = lambda_bar / std::sqrt(gamma) * std::max(norm1, norm2);
    const double jp = std::max(std::abs(eval_J_prime(model, 0.0)), std::abs(eval_J_prime(model, zmax)));
    // J'' is convex, so its sup over [0, zmax] sits at an end point
    const double js = std::max(eval_J_second(model, 0.0), eval_J_second(model, zmax));
    return sup_r0 * b_bar * std::exp(lambda_bar * t_star * jp) * js * lambda_bar * lambda_bar;
}

std::vector<SweepRow> explosion_sweep(const LevyModel& model, const Volatility& vol,
                                      const std::vector<double>& levels, const SweepConfig& sc,
                                      const SolverConfig& cfg) {
    const Grid g = Grid::make(sc.t_star, sc.x_max, sc.h);
    SimConfig sim;
    sim.t_star = sc.t_star;
    sim.dt = sc.h;
    sim.n_threshold = sc.n_threshold;
    sim.seed = sc.seed;
    sim.max_jumps = sc.max_jumps;
    JPrimeTable jp(model);
    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < sc.n_paths; ++p) {
        const LevyPathRecord path = simulate(model, sim, p);
        for (double k : levels) {
            const WeightedCurve r0(0.0, g.h, std::vector<double>(g.N() + 1, k), cfg.gamma);
            const RandomFactorField f = compute_a(path, vol, r0, model.q, g);
            SolverConfig c = cfg;
            c.cap = 0.0;  // follows the level
            const SolveReport rep = solve_monotone(f, vol, jp, c);
            SweepRow row;
            row.k = k;
            row.path_index = p;
            row.status = rep.status;
            row.n_iters = rep.n_iters;
            row.rule = rep.rule;
            for (double s : rep.iterate_sup_norms) {
                if (std::isfinite(s)) row.max_sup = std::max(row.max_sup, s);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::optional<double> explosion_threshold(const std::vector<SweepRow>& rows) {
    std::optional<double> k;
    for (const SweepRow& r : rows) {
        if (r.status == SolveStatus::ExplosionDetected && (!k || r.k < *k)) k = r.k;
    }
    return k;
}

void write_field_csv(std::ostream& os, const Field& r) {
    const Grid& g = r.grid();
    os << "t,x,r\n" << std::setprecision(17);
    for (std::size_t i = 0; i <= g.nt; ++i) {
        for (std::size_t j = 0; j <= g.nx; ++j) os << g.t(i) << ',' << g.x(j) << ',' << r(i, j) << '\n';
    }
}

}  // namespace hjmm
