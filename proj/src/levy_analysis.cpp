#include "hjmm/levy_analysis.hpp"

#include "hjmm/path_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjmm {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Undecidable: return "undecidable";
    }
    return "?";
}

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::ExplosionProne: return "ExplosionProne";
    case Regime::GlobalSafe: return "GlobalSafe";
    case Regime::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string_view to_string(Condition c) {
    switch (c) {
    case Condition::B0: return "B0";
    case Condition::B1: return "B1";
    case Condition::B2: return "B2";
    case Condition::B3: return "B3";
    case Condition::B4: return "B4";
    case Condition::B5: return "B5";
    case Condition::L1: return "L1";
    case Condition::L2: return "L2";
    }
    return "?";
}

RhoFit fit_rho(const LevyMeasureSpec& nu) {
    RhoFit fit;
    std::vector<double> lx, ly;
    for (int k = 3; k <= 12; ++k) {
        const double x = std::ldexp(1.0, -k);
        const double v = small_jump_profile(nu, x);
        if (!(v > 0.0) || !std::isfinite(v)) return fit;
        lx.push_back(std::log(x));
        ly.push_back(std::log(v));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.available = true;
    fit.n_points = static_cast<int>(lx.size());
    fit.rho = sxy / sxx;
    fit.intercept = my - fit.rho * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.rho * lx[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.good = fit.rms_residual < kRhoFitTolerance;
    return fit;
}

namespace {

bool finite_moment(const LevyMeasureSpec& nu, int p, const Interval& region, double tilt = 0.0) {
    return std::isfinite(moment_integral(nu, p, region, tilt));
}

Verdict of(bool b) { return b ? Verdict::Holds : Verdict::Fails; }

const Interval kNegTail = Interval::left_open(-kInf, -1.0);
const Interval kPosTail = Interval::right_open(1.0, kInf);

bool has_negative_mass(const LevyMeasureSpec& nu) {
    return support_lower_bound(nu) < 0.0;
}

}  // namespace

Verdict check_condition(const LevyModel& m, Condition c, const ConditionContext& ctx) {
    const LevyMeasureSpec& nu = m.nu;
    switch (c) {
    case Condition::B0:
        return of(finite_moment(nu, 1, kNegTail) && finite_moment(nu, 1, kPosTail));
    case Condition::B1:
        return of(m.q == 0.0 && !has_negative_mass(nu) &&
                  finite_moment(nu, 1, Interval::open(0.0, kInf)));
    case Condition::B2:
        return of(!has_negative_mass(nu) && finite_moment(nu, 2, kPosTail));
    case Condition::L1:
        return of(finite_moment(nu, 2, kNegTail, ctx.z0) && finite_moment(nu, 2, kPosTail));
    case Condition::L2:
        return of(finite_moment(nu, 3, kNegTail, ctx.z0) && finite_moment(nu, 3, kPosTail));
    case Condition::B5: {
        const RhoFit fit = fit_rho(nu);
        if (!fit.available) {
            // no mass near 0 at all: the profile cannot be regularly varying
            return small_jump_profile(nu, std::ldexp(1.0, -12)) == 0.0 ? Verdict::Fails
                                                                         : Verdict::Undecidable;
        }
        return fit.good ? Verdict::Holds : Verdict::Undecidable;
    }
    case Condition::B3: {
        if (m.q > 0.0 || has_negative_mass(nu)) return Verdict::Holds;
        // J' bounded above rules out (ln z)^3 growth
        if (finite_moment(nu, 1, Interval::open(0.0, 1.0))) return Verdict::Fails;
        const RhoFit fit = fit_rho(nu);
        if (fit.available && fit.good) {
            if (fit.rho < 1.0 - kRhoUndecidableBand) return Verdict::Holds;
            if (fit.rho > 1.0 + kRhoUndecidableBand) return Verdict::Fails;
        }
        return Verdict::Undecidable;
    }
    case Condition::B4: {
        if (m.q > 0.0 || has_negative_mass(nu)) return Verdict::Fails;
        if (check_condition(m, Condition::B1) == Verdict::Holds) return Verdict::Holds;
        // q = 0, no negative jumps and int_0^1 y nu < inf: J' is bounded
        if (finite_moment(nu, 1, Interval::open(0.0, 1.0))) return Verdict::Holds;
        const RhoFit fit = fit_rho(nu);
        if (fit.available && fit.good) {
            if (fit.rho > 1.0 + kRhoUndecidableBand) return Verdict::Holds;
            if (fit.rho < 1.0 - kRhoUndecidableBand) return Verdict::Fails;
        }
        return Verdict::Undecidable;
    }
    }
    return Verdict::Undecidable;
}

double J_prime_limit(const LevyModel& m) {
    return -m.a + moment_integral(m.nu, 1, Interval::open(0.0, 1.0));
}

ExponentReport classify(const LevyModel& m, const std::vector<double>& z_grid,
                        const ConditionContext& ctx, std::optional<double> lambda_bar_t_star) {
    ExponentReport rep;
    rep.domain_sup = exponent_domain_sup(m);
    rep.z0 = ctx.z0;
    rep.lambda_bar_t_star = lambda_bar_t_star;
    for (double z : z_grid) {
        rep.values.push_back({z, eval_J(m, z), eval_J_prime(m, z), eval_J_second(m, z)});
    }
    for (Condition c : {Condition::B0, Condition::B1, Condition::B2, Condition::B3, Condition::B4,
                        Condition::B5, Condition::L1, Condition::L2}) {
        rep.flags[std::string(to_string(c))] = check_condition(m, c, ctx);
    }
    rep.rho = fit_rho(m.nu);

    const bool b3 = rep.flags["B3"] == Verdict::Holds;
    const bool b4 = rep.flags["B4"] == Verdict::Holds;
    if (b3) {
        rep.regime = Regime::ExplosionProne;
        if (m.q > 0.0) rep.regime_basis.push_back("q>0");
        if (has_negative_mass(m.nu)) rep.regime_basis.push_back("negative jumps");
        if (rep.regime_basis.empty()) rep.regime_basis.push_back("rho<1");
    } else if (b4) {
        rep.regime = Regime::GlobalSafe;
        if (rep.flags["B1"] == Verdict::Holds) rep.regime_basis.push_back("B1");
        if (rep.rho.available && rep.rho.good && rep.rho.rho > 1.0 + kRhoUndecidableBand) {
            rep.regime_basis.push_back("rho>1");
        }
        if (rep.regime_basis.empty()) rep.regime_basis.push_back("J' bounded");
    }
    return rep;
}

bool check_positivity_linear(const LevyModel& m, double lambda_bar) {
    if (!(lambda_bar > 0.0)) throw std::invalid_argument("positivity: lambda_bar must be positive");
    return support_lower_bound(m.nu) >= -1.0 / lambda_bar;
}

namespace {

// central differences inside, second-order one-sided at the ends
double diff(const std::vector<double>& grid, std::size_t k, auto value) {
    const std::size_t n = grid.size();
    if (k == 0) {
        const double h1 = grid[1] - grid[0], h2 = grid[2] - grid[0];
        return (-value(0) * (h1 + h2) / (h1 * h2) + value(1) * h2 / (h1 * (h2 - h1)) -
                value(2) * h1 / (h2 * (h2 - h1)));
    }
    if (k == n - 1) {
        const double h1 = grid[n - 1] - grid[n - 2], h2 = grid[n - 1] - grid[n - 3];
        return (value(n - 1) * (h1 + h2) / (h1 * h2) - value(n - 2) * h2 / (h1 * (h2 - h1)) +
                value(n - 3) * h1 / (h2 * (h2 - h1)));
    }
    return (value(k + 1) - value(k - 1)) / (grid[k + 1] - grid[k - 1]);
}

}  // namespace

GCheckResult check_G_conditions(const GSamples& s, double u, GVariant variant, const GBounds& b) {
    const std::size_t nx = s.x.size();
    const std::size_t ny = s.y.size();
    if (nx < 3 || ny < 3 || s.g.size() != nx * ny) throw std::invalid_argument("G check: malformed grid");
    if (s.y[0] != 0.0) throw std::invalid_argument("G check: y grid must start at 0");
    for (std::size_t i = 1; i < nx; ++i) {
        if (!(s.x[i] > s.x[i - 1])) throw std::invalid_argument("G check: x grid must increase");
    }
    for (std::size_t j = 1; j < ny; ++j) {
        if (!(s.y[j] > s.y[j - 1])) throw std::invalid_argument("G check: y grid must increase");
    }
    if (s.x[0] < 0.0) throw std::invalid_argument("G check: x grid must be nonnegative");

    // partials on the grid
    std::vector<double> gx(nx * ny), gy(nx * ny), gxy(nx * ny), gyy(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            gx[i * ny + j] = diff(s.x, i, [&](std::size_t k) { return s.at(k, j); });
            gy[i * ny + j] = diff(s.y, j, [&](std::size_t k) { return s.at(i, k); });
        }
    }
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            gxy[i * ny + j] = diff(s.y, j, [&](std::size_t k) { return gx[i * ny + k]; });
            gyy[i * ny + j] = diff(s.y, j, [&](std::size_t k) { return gy[i * ny + k]; });
        }
    }

    GCheckResult res;
    auto fail = [&](const char* clause, std::size_t i, std::size_t j, double v) {
        if (!res.holds) return;
        res.holds = false;
        res.clause = clause;
        res.x = s.x[i];
        res.y = s.y[j];
        res.value = v;
    };
    // slope of f in y between neighbouring nodes, maximised over the grid
    auto lipschitz_y = [&](const std::vector<double>& f) {
        double c = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 1; j < ny; ++j) {
                c = std::max(c, std::abs(f[i * ny + j] - f[i * ny + j - 1]) / (s.y[j] - s.y[j - 1]));
            }
        }
        return c;
    };

    double scale = 0.0;
    for (double v : s.g) scale = std::max(scale, std::abs(v));
    const double tol = b.tol * std::max(1.0, scale);

    switch (variant) {
    case GVariant::G1: {
        for (std::size_t i = 0; i < nx; ++i) {
            if (std::abs(s.at(i, 0)) > tol) fail("G1(i) g(x,0)=0", i, 0, s.at(i, 0));
            for (std::size_t j = 0; j < ny; ++j) {
                const double g = s.at(i, j);
                if (!std::isfinite(g)) fail("G1(i) continuity", i, j, g);
                if (g < -tol) fail("G1(i) g>=0", i, j, g);
                const double lhs = s.y[j] + g * u;
                if (lhs < -tol) fail("G1(ii) y+g(x,y)u>=0", i, j, lhs);
            }
        }
        res.lipschitz_estimate = lipschitz_y(s.g);
        if (res.lipschitz_estimate > b.lipschitz) fail("G1(iii) Lipschitz in y", 0, 0, res.lipschitz_estimate);
        break;
    }
    case GVariant::G2: {
        for (std::size_t i = 0; i < nx; ++i) {
            if (std::abs(gx[i * ny]) > tol) fail("G2(i) g'_x(x,0)=0", i, 0, gx[i * ny]);
        }
        double dmax = 0.0;
        for (double v : gy) dmax = std::max(dmax, std::abs(v));
        res.derivative_estimate = dmax;
        if (dmax > b.derivative) fail("G2(ii) sup|g'_y|", 0, 0, dmax);
        res.lipschitz_estimate = lipschitz_y(gx) + lipschitz_y(gy);
        if (res.lipschitz_estimate > b.lipschitz) fail("G2(iii) Lipschitz of g'_x, g'_y", 0, 0, res.lipschitz_estimate);
        break;
    }
    case GVariant::G3: {
        double dmax = 0.0;
        for (std::size_t k = 0; k < nx * ny; ++k) {
            dmax = std::max({dmax, std::abs(gy[k]), std::abs(gxy[k]), std::abs(gyy[k])});
        }
        res.derivative_estimate = dmax;
        if (dmax > b.derivative) fail("G3(i) bounded derivatives", 0, 0, dmax);
        double cmax = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const double g = s.at(i, j);
                if (g < -tol) fail("G3(ii) g>=0", i, j, g);
                if (j == 0) {
                    if (std::abs(g) > tol) fail("G3(ii) g<=c sqrt(y)", i, j, g);
                    continue;
                }
                cmax = std::max(cmax, g / std::sqrt(s.y[j]));
            }
        }
        res.sqrt_coef_estimate = cmax;
        if (cmax > b.sqrt_coef) fail("G3(ii) g<=c sqrt(y)", 0, 0, cmax);
        // h(x) = sup_y |g'_x(x,y)|, weighted L2 norm by trapezoid with gamma = 1
        double acc = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            double h = 0.0;
            for (std::size_t j = 0; j < ny; ++j) h = std::max(h, std::abs(gx[i * ny + j]));
            const double w = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            const double dxi = (i + 1 < nx) ? s.x[i + 1] - s.x[i] : s.x[i] - s.x[i - 1];
            acc += w * dxi * h * h * std::exp(s.x[i]);
        }
        res.h_norm_l2gamma = std::sqrt(acc);
        if (!std::isfinite(res.h_norm_l2gamma)) fail("G3(iii) |g'_x|<=h(x)", 0, 0, res.h_norm_l2gamma);
        break;
    }
    }
    return res;
}

std::vector<MgfRow> mgf_consistency(const LevyModel& m, const std::vector<double>& zs, double t,
                                    std::size_t n_paths, std::uint64_t seed, int n_threshold) {
    if (!(t > 0.0)) throw std::invalid_argument("mgf_consistency: t must be positive");
    if (n_paths < 2) throw std::invalid_argument("mgf_consistency: need at least 2 paths");
    const double zsup = exponent_domain_sup(m);
    std::vector<MgfRow> rows(zs.size());
    std::vector<double> sum(zs.size(), 0.0), sum2(zs.size(), 0.0);
    std::vector<char> use(zs.size(), 0);
    for (std::size_t k = 0; k < zs.size(); ++k) {
        rows[k].z = zs[k];
        const double j = zs[k] >= 0.0 && zs[k] < zsup ? eval_J(m, zs[k]) : kInf;
        rows[k].skipped = !std::isfinite(j);
        rows[k].tJ = t * j;
        use[k] = !rows[k].skipped;
    }
    SimConfig cfg;
    cfg.t_star = t;
    cfg.dt = t;
    cfg.n_threshold = n_threshold;
    cfg.seed = seed;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const LevyPathRecord path = simulate(m, cfg, p);
        const double l = path.grid_values.back();
        for (std::size_t k = 0; k < zs.size(); ++k) {
            if (!use[k]) continue;
            const double v = std::exp(-zs[k] * l);
            sum[k] += v;
            sum2[k] += v * v;
        }
    }
    const double n = static_cast<double>(n_paths);
    for (std::size_t k = 0; k < zs.size(); ++k) {
        if (!use[k]) continue;
        const double mean = sum[k] / n;
        const double var = std::max(0.0, (sum2[k] - n * mean * mean) / (n - 1.0));
        rows[k].log_mean = std::log(mean);
        rows[k].gap = std::abs(rows[k].log_mean - rows[k].tJ);
        rows[k].se = std::sqrt(var / n) / mean;
    }
    return rows;
}

}  // namespace hjmm
