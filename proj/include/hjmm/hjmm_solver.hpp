#pragma once
// Monotone fixed-point iteration for the integral form of the linear HJMM
// equation,
//   r = K(r),  K(h)(t,x) = a(t,x) exp( int_0^t J'(Lambda_h(s, t-s+x)) lambda(t-s+x) ds ),
//   Lambda_h(s, y) = int_0^y lambda(v) h(s,v) dv,
// started from h0 = 0, together with the a-priori bound, residual checks
// against the mild and strong forms, and the Gronwall-type uniqueness check.

#include "hjmm/field.hpp"
#include "hjmm/function_space.hpp"
#include "hjmm/laplace_exponent.hpp"
#include "hjmm/path_sim.hpp"
#include "hjmm/random_factor.hpp"
#include "hjmm/volatility.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hjmm {

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 200;
    double cap = 0.0;  // 0 selects 1e8 (1 + sup r0)
    double gamma = 1.0;
};

enum class SolveStatus { Converged, ExplosionDetected, MaxIterReached };
std::string_view to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIterReached;
    Field r;                                // last iterate
    std::vector<double> iterate_sup_norms;  // sup norm of h_1, h_2, ...
    std::vector<double> iterate_l2_norms;   // sup_t ||h_n(t)||_{L^{2,gamma}}
    std::optional<double> c1;
    int n_iters = 0;
    double last_change = 0.0;  // sup |h_n - h_{n-1}|
    double cap = 0.0;
    std::string rule;  // which stopping rule fired
    std::vector<double> mild_residuals;
    std::vector<double> strong_residuals;
};

struct SolveOptions {
    const Field* h0 = nullptr;  // start other than 0
    std::function<void(int, const Field&)> observer;  // called with (n, h_n), n >= 1
};

// Lambda(k, m) = int_0^{x_m} lambda h(k, .) and sup_t ||h(t)||_{L^{2,gamma}}
double sup_row_norm_l2gamma(const Field& h, double gamma);

Field apply_K(const Field& h, const RandomFactorField& factor, const Volatility& vol, JPrimeTable& jp);

SolveReport solve_monotone(const RandomFactorField& factor, const Volatility& vol, JPrimeTable& jp,
                           const SolverConfig& cfg, const SolveOptions& opt = {});

// smallest c on a grid of 60 points per decade from b_bar ||r0|| up to 1e12
// with ln(b_bar ||r0||) + lambda_bar T* max(J'(lambda_bar c / sqrt(gamma)), 0) <= ln c
std::optional<double> a_priori_c1(double b_bar, double r0_norm, double lambda_bar, double t_star,
                                  double gamma, const LevyModel& model);

// ||r(t_i) - RHS(t_i)||_{L^{2,gamma}} on [0, x_max] for every grid t_i, where RHS
// is the mild form with left-point sums in time. Throws std::logic_error
// unless the report converged.
std::vector<double> mild_residual(const SolveReport& report, const LevyPathRecord& path,
                                  const RandomFactorField& factor, const Volatility& vol,
                                  const LevyModel& model, const WeightedCurve& r0);

struct StrongResidual {
    double sup = 0.0;
    std::vector<double> l2;  // per t_i
};

// d/dx r = r [r0'/r0 (t+x) + lambda^2 int_0^t J''(lambda int_0^{t-s+x} r(s,.)) r(s, t-s+x) ds]
StrongResidual strong_residual(const SolveReport& report, const WeightedCurve& r0, const Volatility& vol,
                               const LevyModel& model);

struct GronwallResult {
    bool holds = true;
    double worst_excess = 0.0;  // max of d - C int int d (<= abs_tol when holding)
    double sup_d = 0.0;
    double zero_within = 0.0;   // sup over the grid of M C^n (t (t+x))^n / (n!)^2, n = 10
    bool within_bound = true;   // sup d <= zero_within
};

// d >= 0 on the grid; checks d <= C int_0^t int_0^{t-s+x} d + abs_tol at every node
GronwallResult gronwall_check(const Field& d, double C, double abs_tol = 0.0);

// constant of the uniqueness argument:
// sup r0 * b_bar * e^{lambda_bar T* max_k |J'(lambda_bar/sqrt(gamma) n_k)|} * J''(0) lambda_bar^2
double uniqueness_constant(double sup_r0, double b_bar, double lambda_bar, double t_star, double gamma,
                           const LevyModel& model, double norm1, double norm2);

struct SweepRow {
    double k = 0.0;
    std::uint64_t path_index = 0;
    SolveStatus status = SolveStatus::MaxIterReached;
    int n_iters = 0;
    double max_sup = 0.0;
    std::string rule;
};

struct SweepConfig {
    double t_star = 1.0;
    double x_max = 4.0;
    double h = 1.0 / 32.0;
    int n_threshold = 1000;
    std::size_t max_jumps = 1000000;
    std::uint64_t seed = 0;
    std::size_t n_paths = 1;
};

// one solve per level k (r0 = k) and path
std::vector<SweepRow> explosion_sweep(const LevyModel& model, const Volatility& vol,
                                      const std::vector<double>& levels, const SweepConfig& sc,
                                      const SolverConfig& cfg);
// smallest level that exploded, if any
std::optional<double> explosion_threshold(const std::vector<SweepRow>& rows);

void write_field_csv(std::ostream& os, const Field& r);

}  // namespace hjmm
