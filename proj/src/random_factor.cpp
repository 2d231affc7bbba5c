#include "hjmm/random_factor.hpp"

#include "hjmm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace hjmm {

namespace {

void check_path_grid(const LevyPathRecord& path, const Grid& grid) {
    if (path.dt != grid.h || path.steps() != grid.nt) {
        throw std::invalid_argument("random factor: path grid does not match the field grid");
    }
}

std::vector<double> sample_on_grid(const Grid& g, auto f) {
    std::vector<double> v(g.N() + 1);
    for (std::size_t m = 0; m <= g.N(); ++m) v[m] = f(g.x(m));
    return v;
}

}  // namespace

Field compute_I1(const LevyPathRecord& path, const Volatility& vol, const Grid& grid) {
    check_path_grid(path, grid);
    const std::size_t N = grid.N();
    const double h = grid.h;
    Field out(grid);

    // continuous part of L on the grid
    std::vector<double> lc(grid.nt + 1);
    for (std::size_t i = 0; i <= grid.nt; ++i) lc[i] = path.continuous_at(grid.t(i));

    const std::vector<double> lam = sample_on_grid(grid, [&](double x) { return vol(x); });
    if (vol.is_constant()) {
        // lambda L(t), exact
        for (std::size_t i = 0; i <= grid.nt; ++i) {
            const double l = path.grid_values[i];
            for (double& v : out.row(i)) v = lam[0] * l;
        }
        return out;
    }
    const std::vector<double> dlam = sample_on_grid(grid, [&](double x) { return vol.derivative(x); });

    // Q[d] = sum_{k <= i} lambda'_{d-k} L^c_k along the anti-diagonal d = i + j
    std::vector<double> q(N + 1, 0.0);
    std::vector<double> tmp(N + 1);
    for (std::size_t i = 0; i <= grid.nt; ++i) {
        const std::size_t len = N - i + 1;
        for (std::size_t j = 0; j < len; ++j) tmp[j] = dlam[j] * lc[i];
        kernels::add_inplace(std::span<double>(q.data() + i, len), std::span<const double>(tmp.data(), len));
        auto row = out.row(i);
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t d = i + j;
            double integral = 0.0;
            if (i > 0) integral = h * (q[d] - 0.5 * dlam[d] * lc[0] - 0.5 * dlam[j] * lc[i]);
            row[j] = lam[j] * lc[i] + integral;
        }
    }
    // jumps: y lambda(t - s + x), exact
    for (const Jump& jmp : path.jumps) {
        for (std::size_t i = 0; i <= grid.nt; ++i) {
            const double t = grid.t(i);
            if (jmp.time > t) continue;
            auto row = out.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) row[j] += jmp.size * vol(t - jmp.time + grid.x(j));
        }
    }
    return out;
}

Field compute_I2(const LevyPathRecord& path, const Volatility& vol, const Grid& grid, bool* positivity_ok) {
    check_path_grid(path, grid);
    Field out(grid, 1.0);
    bool ok = true;
    for (const Jump& jmp : path.jumps) {
        for (std::size_t i = 0; i <= grid.nt; ++i) {
            const double t = grid.t(i);
            if (jmp.time > t) continue;
            auto row = out.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double ly = vol(t - jmp.time + grid.x(j)) * jmp.size;
                const double f = 1.0 + ly;
                if (!(f > 0.0)) ok = false;
                row[j] *= f * std::exp(-ly);
            }
        }
    }
    if (positivity_ok != nullptr) *positivity_ok = ok;
    return out;
}

Field compute_lambda_sq_integral(const Volatility& vol, const Grid& grid) {
    Field out(grid);
    const std::size_t N = grid.N();
    const double h = grid.h;
    if (vol.is_constant()) {
        const double l2 = vol(0.0) * vol(0.0);
        for (std::size_t i = 0; i <= grid.nt; ++i) {
            for (double& v : out.row(i)) v = l2 * grid.t(i);
        }
        return out;
    }
    std::vector<double> l2(N + 1), cum(N + 2, 0.0);
    for (std::size_t m = 0; m <= N; ++m) {
        const double l = vol(grid.x(m));
        l2[m] = l * l;
        cum[m + 1] = cum[m] + l2[m];
    }
    // sum_{k=0}^{i} lambda^2_{d-k} = cum[d+1] - cum[d-i]
    for (std::size_t i = 1; i <= grid.nt; ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const std::size_t d = i + j;
            row[j] = h * (cum[d + 1] - cum[d - i] - 0.5 * (l2[d] + l2[j]));
        }
    }
    return out;
}

RandomFactorField compute_a(const LevyPathRecord& path, const Volatility& vol, const WeightedCurve& r0,
                            double q, const Grid& grid) {
    if (std::abs(r0.dx - grid.h) > 1e-15 * grid.h || r0.x0 != 0.0) {
        throw std::invalid_argument("compute_a: r0 must be sampled from x = 0 with dx = grid step");
    }
    if (r0.size() < grid.N() + 1) {
        throw std::invalid_argument("compute_a: r0 grid too short, need x up to t* + x_max");
    }
    RandomFactorField f;
    f.grid = grid;
    f.r0 = r0;
    f.I1 = compute_I1(path, vol, grid);
    f.I2 = compute_I2(path, vol, grid, &f.positivity_ok);
    const Field lsq = compute_lambda_sq_integral(vol, grid);
    f.a = Field(grid);
    f.b = Field(grid);
    double bbar = 0.0;
    for (std::size_t i = 0; i <= grid.nt; ++i) {
        auto i1 = f.I1.row(i);
        auto i2 = f.I2.row(i);
        auto ls = lsq.row(i);
        auto brow = f.b.row(i);
        auto arow = f.a.row(i);
        for (std::size_t j = 0; j < brow.size(); ++j) {
            brow[j] = std::exp(i1[j] - 0.5 * q * ls[j]) * i2[j];
            bbar = std::max(bbar, brow[j]);
        }
        kernels::multiply(arow, std::span<const double>(r0.values.data() + i, arow.size()), brow);
    }
    // a(0, x) = r0(x) exactly
    auto a0 = f.a.row(0);
    std::copy_n(r0.values.begin(), a0.size(), a0.begin());
    f.b_bar = bbar;
    f.max_abs_I1 = f.I1.sup_norm();
    f.max_abs_I2 = f.I2.sup_norm();
    return f;
}

void write_factor_csv(std::ostream& os, const RandomFactorField& f) {
    os << "t,x,I1,I2,a\n" << std::setprecision(17);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i <= g.nt; ++i) {
        for (std::size_t j = 0; j <= g.nx; ++j) {
            os << g.t(i) << ',' << g.x(j) << ',' << f.I1(i, j) << ',' << f.I2(i, j) << ',' << f.a(i, j) << '\n';
        }
    }
}

}  // namespace hjmm
