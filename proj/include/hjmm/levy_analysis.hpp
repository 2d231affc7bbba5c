#pragma once
// Integrability and growth conditions on the triplet, regime
// classification, positivity predicates and a Monte Carlo check of
// E e^{-z L(t)} = e^{t J(z)}.

#include "hjmm/laplace_exponent.hpp"
#include "hjmm/levy_model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hjmm {

enum class Verdict { Holds, Fails, Undecidable };
enum class Regime { ExplosionProne, GlobalSafe, Indeterminate };
enum class Condition { B0, B1, B2, B3, B4, B5, L1, L2 };

std::string_view to_string(Verdict v);
std::string_view to_string(Regime r);
std::string_view to_string(Condition c);

// Least-squares slope of log int_0^x y^2 nu(dy) against log x on
// x = 2^-k, k = 3..12.
struct RhoFit {
    bool available = false;  // false when the profile vanishes somewhere on the fit grid
    double rho = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    bool good = false;  // rms_residual < kRhoFitTolerance
    int n_points = 0;
};

inline constexpr double kRhoFitTolerance = 0.05;
inline constexpr double kRhoUndecidableBand = 0.05;

RhoFit fit_rho(const LevyMeasureSpec& nu);

struct ConditionContext {
    double z0 = 1.0;  // exponential tilt used by L1/L2
};

Verdict check_condition(const LevyModel& m, Condition c, const ConditionContext& ctx = {});

// -a + int y 1{0<y<1} nu(dy): limit of J' at infinity when (B1) holds
double J_prime_limit(const LevyModel& m);

struct ExponentRow {
    double z, J, J_prime, J_second;
};

struct ExponentReport {
    double domain_sup = kInf;
    std::vector<ExponentRow> values;
    std::map<std::string, Verdict> flags;
    Regime regime = Regime::Indeterminate;
    std::vector<std::string> regime_basis;  // sufficient conditions that fired
    RhoFit rho;
    double z0 = 1.0;
    std::optional<double> lambda_bar_t_star;  // echoed for manual (B4) inspection
};

ExponentReport classify(const LevyModel& m, const std::vector<double>& z_grid,
                        const ConditionContext& ctx = {},
                        std::optional<double> lambda_bar_t_star = std::nullopt);

// inf supp nu >= -1/lambda_bar
bool check_positivity_linear(const LevyModel& m, double lambda_bar);

// g(x, y) tabulated on a rectangular grid with y[0] = 0; partial
// derivatives come from finite differences.
struct GSamples {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> g;  // row-major, g[i * y.size() + j] = g(x_i, y_j)
    double at(std::size_t i, std::size_t j) const { return g[i * y.size() + j]; }
};

enum class GVariant { G1, G2, G3 };

struct GBounds {
    double lipschitz = kInf;   // C in the Lipschitz clauses
    double derivative = kInf;  // bound on |g'_y|, |g''_xy|, |g''_yy|
    double sqrt_coef = kInf;   // c in g <= c sqrt(y)
    double tol = 1e-9;         // slack for the equality and sign clauses
};

struct GCheckResult {
    bool holds = true;
    std::string clause;  // failing clause, e.g. "G1(ii)"
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;  // offending value at the witness
    // estimated constants over the grid
    double lipschitz_estimate = 0.0;
    double derivative_estimate = 0.0;
    double sqrt_coef_estimate = 0.0;
    double h_norm_l2gamma = 0.0;  // G3(iii): || sup_y |g'_x| ||, reported with gamma = 1
};

// Grid verification of the clauses of one variant only.
GCheckResult check_G_conditions(const GSamples& g, double nu_support_inf, GVariant variant,
                                const GBounds& bounds = {});

struct MgfRow {
    double z = 0.0;
    bool skipped = false;
    double log_mean = 0.0;  // log of the sample mean of e^{-z L(t)}
    double tJ = 0.0;
    double gap = 0.0;
    double se = 0.0;  // delta-method standard error of log_mean
};

std::vector<MgfRow> mgf_consistency(const LevyModel& m, const std::vector<double>& zs, double t,
                                    std::size_t n_paths, std::uint64_t seed,
                                    int n_threshold = 1000);

}  // namespace hjmm
