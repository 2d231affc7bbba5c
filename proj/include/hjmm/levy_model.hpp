#pragma once
// Lévy triplet (a, q, nu). The jump measure is a finite sum of atoms and
// parametric densities, which is enough to get every moment integral in
// closed form or by one-dimensional quadrature.

#include <limits>
#include <string>
#include <vector>

namespace hjmm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval closed(double a, double b) { return {a, b, true, true}; }
    static Interval open(double a, double b) { return {a, b, false, false}; }
    // (a, b]
    static Interval left_open(double a, double b) { return {a, b, false, true}; }
    // [a, b)
    static Interval right_open(double a, double b) { return {a, b, true, false}; }
    static Interval real_line() { return {}; }

    bool contains(double y) const;
    bool empty() const;
};

enum class DensityKind { PowerLaw, Exponential, Uniform };

// Density on [lo, hi] lying entirely on one side of 0:
//   PowerLaw     c |y|^{-1-alpha}
//   Exponential  c e^{-beta |y|}
//   Uniform      c
struct DensityPart {
    DensityKind kind = DensityKind::Uniform;
    double c = 0.0;
    double shape = 0.0;  // alpha or beta
    double lo = 0.0;
    double hi = 0.0;

    static DensityPart power_law(double c, double alpha, double lo, double hi);
    static DensityPart exponential(double c, double beta, double lo, double hi);
    static DensityPart uniform(double c, double lo, double hi);

    double density(double y) const;
    bool negative() const { return hi <= 0.0; }
    // support expressed in u = |y|
    double abs_lo() const { return negative() ? -hi : lo; }
    double abs_hi() const { return negative() ? -lo : hi; }
    // density as a function of u = |y|
    double density_abs(double u) const;
};

struct Atom {
    double y = 0.0;
    double mass = 0.0;
};

class LevyMeasureSpec {
public:
    LevyMeasureSpec() = default;
    // throws std::invalid_argument unless int (y^2 ^ 1) nu(dy) < inf
    LevyMeasureSpec(std::vector<Atom> atoms, std::vector<DensityPart> parts);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPart>& parts() const { return parts_; }
    bool is_zero() const { return atoms_.empty() && parts_.empty(); }
    // true when some density part has infinite mass near the origin
    bool infinite_activity() const;

    LevyMeasureSpec atoms_only() const { return {atoms_, {}}; }
    LevyMeasureSpec densities_only() const { return {{}, parts_}; }

private:
    std::vector<Atom> atoms_;
    std::vector<DensityPart> parts_;
};

struct LevyModel {
    double a = 0.0;
    double q = 0.0;
    LevyMeasureSpec nu;

    LevyModel() = default;
    LevyModel(double a_, double q_, LevyMeasureSpec nu_);
};

// int_region |y|^p e^{tilt |y| 1{y<0}} nu(dy); +inf when it diverges.
double moment_integral(const LevyMeasureSpec& nu, int p, const Interval& region,
                       double exp_tilt = 0.0);

// Same integrand but with e^{-kappa |y|} on the density parts and atoms that
// fall inside region, regardless of sign. Used for the pieces of J.
double weighted_moment(const LevyMeasureSpec& nu, int p, const Interval& region,
                       double kappa);

// inf supp nu (+inf for the zero measure)
double support_lower_bound(const LevyMeasureSpec& nu);

// int_{(0,x]} y^2 nu(dy)
double small_jump_profile(const LevyMeasureSpec& nu, double x);

}  // namespace hjmm
