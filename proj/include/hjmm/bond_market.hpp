#pragma once
// Bond prices, short rate and the HJM drift identity on solved fields.
// Moving frame r(t, x); natural frame f(t, T) = r(t, T - t).

#include "hjmm/field.hpp"
#include "hjmm/function_space.hpp"
#include "hjmm/hjmm_solver.hpp"
#include "hjmm/levy_model.hpp"
#include "hjmm/volatility.hpp"

#include <string>
#include <vector>

namespace hjmm {

// f(t_i, T_j) for T_j >= t_i, stored on a full (nt + 1) x (N + 1) block;
// entries with j < i are NaN and never read.
class NaturalField {
public:
    NaturalField() = default;
    explicit NaturalField(const Grid& g);

    const Grid& grid() const { return grid_; }
    std::size_t width() const { return grid_.N() + 1; }
    // throws when T_j < t_i
    double at(std::size_t i, std::size_t j) const;
    double& raw(std::size_t i, std::size_t j) { return data_[i * width() + j]; }
    double raw(std::size_t i, std::size_t j) const { return data_[i * width() + j]; }

private:
    Grid grid_;
    std::vector<double> data_;
};

NaturalField to_natural_frame(const Field& r);
Field to_moving_frame(const NaturalField& f);

// exp(-int_0^{T-t} r(t, v) dv) by the trapezoid rule; t and T on the grid
double bond_price(const Field& r, double t, double T);
double bond_price(const WeightedCurve& curve, double tau);
// v(t) = r(t, 0)
double short_rate(const Field& r, double t);

// P(t, T) >= exp(-gamma^{-1/2} ||r(t)||_{L^{2,gamma}}) for the longest maturity on the grid
BoundCheck bond_lower_bound_check(const Field& r, double t, double gamma);

struct HjmRow {
    double T = 0.0;
    double drift_integral = 0.0;  // int_t^T alpha(t, u) du
    double exponent = 0.0;        // J(int_t^T sigma(t, u) du)
    double residual = 0.0;
    bool ok = true;  // false when J was not finite; residual is then NaN
};

// sigma(t, u) = lambda(u - t) f(t, u), alpha = J'(int_t^u sigma) sigma
std::vector<HjmRow> hjm_drift_check(const Field& r, const Volatility& vol, const LevyModel& model, double t);

struct MartingaleConfig {
    double t_star = 1.0;
    double x_max = 1.0;
    double h = 1.0 / 32.0;
    double gamma = 1.0;
    int n_threshold = 1000;
    std::size_t max_jumps = 1000000;
    std::uint64_t seed = 0;
    std::size_t n_paths = 1000;
    std::vector<double> checkpoints{0.5};  // t
    std::vector<double> maturities{1.0};   // T
    SolverConfig solver;
    unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct MartingaleRow {
    double t = 0.0;
    double T = 0.0;
    double p0 = 0.0;  // P(0, T)
    double mean = 0.0;  // mean of e^{-int_0^t v} P(t, T)
    double se = 0.0;
    double gap = 0.0;  // mean - p0
};

struct MartingaleReport {
    std::vector<MartingaleRow> rows;
    std::size_t n_used = 0;
    std::size_t n_exploded = 0;
    std::size_t n_not_converged = 0;
    // the check compares expectations; a strictly local martingale may fail it
    std::string property = "expectation constancy of discounted prices (local-martingale property not tested)";
};

MartingaleReport martingale_mc(const LevyModel& model, const Volatility& vol, const WeightedCurve& r0,
                               const MartingaleConfig& cfg);

}  // namespace hjmm
