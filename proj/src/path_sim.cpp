#include "hjmm/path_sim.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace hjmm {

namespace {

constexpr std::uint64_t kStreamVersion = 1;

// One piece of nu restricted to |y| > thr, in u = |y| on [lo, hi].
struct SamplingPiece {
    double mass = 0.0;
    bool is_atom = false;
    double atom_y = 0.0;
    DensityKind kind = DensityKind::Uniform;
    double shape = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double sign = 1.0;
};

std::vector<SamplingPiece> sampling_pieces(const LevyMeasureSpec& nu, double thr) {
    std::vector<SamplingPiece> out;
    for (const Atom& at : nu.atoms()) {
        if (std::abs(at.y) <= thr) continue;
        SamplingPiece p;
        p.mass = at.mass;
        p.is_atom = true;
        p.atom_y = at.y;
        out.push_back(p);
    }
    for (const DensityPart& d : nu.parts()) {
        const double lo = std::max(d.abs_lo(), thr);
        const double hi = d.abs_hi();
        if (!(hi > lo)) continue;
        SamplingPiece p;
        p.kind = d.kind;
        p.shape = d.shape;
        p.lo = lo;
        p.hi = hi;
        p.sign = d.negative() ? -1.0 : 1.0;
        const Interval region = d.negative() ? Interval::open(-hi, -lo) : Interval::open(lo, hi);
        p.mass = weighted_moment(LevyMeasureSpec({}, {d}), 0, region, 0.0);
        if (p.mass > 0.0) out.push_back(p);
    }
    return out;
}

// inverse CDF of the normalised density on [lo, hi], v in [0, 1)
double sample_abs(const SamplingPiece& p, double v) {
    const double a = p.lo;
    const double b = p.hi;
    switch (p.kind) {
    case DensityKind::Uniform:
        return a + v * (b - a);
    case DensityKind::Exponential: {
        const double beta = p.shape;
        const double span = std::isinf(b) ? 1.0 : -std::expm1(-beta * (b - a));
        return a - std::log1p(-v * span) / beta;
    }
    case DensityKind::PowerLaw: {
        const double alpha = p.shape;
        if (alpha == 0.0) return a * std::pow(b / a, v);
        const double fa = std::pow(a, -alpha);
        const double fb = std::isinf(b) ? 0.0 : std::pow(b, -alpha);
        return std::pow(fa - v * (fa - fb), -1.0 / alpha);
    }
    }
    return a;
}

void rebuild_grid(LevyPathRecord& p) {
    const std::size_t n = p.brownian_increments.size();
    p.grid_values.assign(n + 1, 0.0);
    const double drift = p.model.a - p.compensator;
    double w = 0.0;
    std::size_t j = 0;
    double jump_sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * p.dt;
        if (i > 0) w += p.brownian_increments[i - 1];
        while (j < p.jumps.size() && p.jumps[j].time <= t) jump_sum += p.jumps[j++].size;
        p.grid_values[i] = drift * t + w + jump_sum;
    }
}

}  // namespace

std::string_view rng_algorithm_id() {
    return "mt19937_64/seed_seq(seed_lo,seed_hi,path,1)/boost.random-1.74";
}

std::size_t grid_steps(double t_star, double dt) {
    if (!(t_star > 0.0) || !(dt > 0.0)) throw std::invalid_argument("grid: t_star and dt must be positive");
    const double ratio = t_star / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * dt - t_star) > 1e-12 * std::max(1.0, t_star)) {
        throw std::invalid_argument("grid: dt must divide t_star");
    }
    return static_cast<std::size_t>(n);
}

double compensator_for_threshold(const LevyModel& m, double thr) {
    if (thr >= 1.0) return 0.0;
    const double pos = weighted_moment(m.nu, 1, Interval::open(thr, 1.0), 0.0);
    const double neg = weighted_moment(m.nu, 1, Interval::open(-1.0, -thr), 0.0);
    return pos - neg;
}

double compensator_m_n(const LevyModel& m, int n_threshold) {
    if (n_threshold < 1) throw std::invalid_argument("compensator: n_threshold must be >= 1");
    return compensator_for_threshold(m, 1.0 / n_threshold);
}

double effective_threshold(const LevyModel& m, int n_threshold) {
    if (n_threshold < 1) throw std::invalid_argument("simulate: n_threshold must be >= 1");
    return m.nu.infinite_activity() ? 1.0 / n_threshold : 0.0;
}

double LevyPathRecord::continuous_at(double t) const {
    if (t < 0.0 || t > t_star * (1.0 + 1e-12)) throw std::invalid_argument("path: t outside [0, T*]");
    const double drift = model.a - compensator;
    const std::size_t n = brownian_increments.size();
    double pos = t / dt;
    std::size_t k = static_cast<std::size_t>(std::floor(pos));
    if (k >= n) {
        k = n;
        pos = static_cast<double>(n);
    }
    double w = 0.0;
    for (std::size_t i = 0; i < k; ++i) w += brownian_increments[i];
    if (k < n) w += (pos - static_cast<double>(k)) * brownian_increments[k];
    return drift * t + w;
}

double LevyPathRecord::value_at(double t) const {
    double v = continuous_at(t);
    for (const Jump& j : jumps) {
        if (j.time > t) break;
        v += j.size;
    }
    return v;
}

double LevyPathRecord::value_at_left_limit(double t) const {
    double v = continuous_at(t);
    for (const Jump& j : jumps) {
        if (j.time >= t) break;
        v += j.size;
    }
    return v;
}

LevyPathRecord make_path(const LevyModel& m, double t_star, double dt,
                         std::vector<double> brownian_increments, std::vector<Jump> jumps,
                         double compensator) {
    const std::size_t n = grid_steps(t_star, dt);
    if (brownian_increments.empty()) brownian_increments.assign(n, 0.0);
    if (brownian_increments.size() != n) throw std::invalid_argument("make_path: increment count");
    for (const Jump& j : jumps) {
        if (!(j.time > 0.0) || j.time > t_star) throw std::invalid_argument("make_path: jump time outside (0, T*]");
    }
    std::stable_sort(jumps.begin(), jumps.end(),
                     [](const Jump& x, const Jump& y) { return x.time < y.time; });
    LevyPathRecord p;
    p.t_star = t_star;
    p.dt = dt;
    p.brownian_increments = std::move(brownian_increments);
    p.jumps = std::move(jumps);
    p.compensator = compensator;
    p.model = m;
    rebuild_grid(p);
    return p;
}

LevyPathRecord simulate(const LevyModel& m, const SimConfig& cfg, std::uint64_t path_index) {
    const std::size_t n = grid_steps(cfg.t_star, cfg.dt);
    const double thr = effective_threshold(m, cfg.n_threshold);

    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(path_index),
                      static_cast<std::uint32_t>(path_index >> 32),
                      static_cast<std::uint32_t>(kStreamVersion)};
    std::mt19937_64 rng(seq);
    boost::random::uniform_01<double> unif;

    const std::vector<SamplingPiece> pieces = sampling_pieces(m.nu, thr);
    double intensity = 0.0;
    for (const SamplingPiece& p : pieces) intensity += p.mass;

    std::vector<Jump> jumps;
    if (intensity > 0.0) {
        boost::random::poisson_distribution<long long, double> count_dist(intensity * cfg.t_star);
        const long long count = count_dist(rng);
        if (count < 0 || static_cast<std::size_t>(count) > cfg.max_jumps) {
            throw CapacityError("simulate: jump count " + std::to_string(count) +
                                " exceeds max_jumps " + std::to_string(cfg.max_jumps));
        }
        jumps.reserve(static_cast<std::size_t>(count));
        for (long long k = 0; k < count; ++k) {
            Jump j;
            j.time = cfg.t_star * (1.0 - unif(rng));  // in (0, T*]
            double pick = unif(rng) * intensity;
            std::size_t idx = 0;
            while (idx + 1 < pieces.size() && pick >= pieces[idx].mass) {
                pick -= pieces[idx].mass;
                ++idx;
            }
            const SamplingPiece& p = pieces[idx];
            j.size = p.is_atom ? p.atom_y : p.sign * sample_abs(p, unif(rng));
            jumps.push_back(j);
        }
    }

    std::vector<double> incs(n, 0.0);
    if (m.q > 0.0) {
        boost::random::normal_distribution<double> gauss(0.0, std::sqrt(m.q * cfg.dt));
        for (double& v : incs) v = gauss(rng);
    }

    LevyPathRecord rec = make_path(m, cfg.t_star, cfg.dt, std::move(incs), std::move(jumps),
                                   compensator_for_threshold(m, thr));
    rec.threshold = thr;
    rec.seed = cfg.seed;
    rec.path_index = path_index;
    return rec;
}

void align_jump_times(LevyPathRecord& path, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("align_jump_times: step must be positive");
    for (Jump& j : path.jumps) {
        double t = std::ceil(j.time / step - 1e-9) * step;
        if (t <= 0.0) t = step;
        j.time = std::min(t, path.t_star);
    }
    std::stable_sort(path.jumps.begin(), path.jumps.end(),
                     [](const Jump& x, const Jump& y) { return x.time < y.time; });
    rebuild_grid(path);
}

}  // namespace hjmm
