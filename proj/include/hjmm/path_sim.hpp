#pragma once
// Paths of L on [0, T*] with an explicit jump list. Jumps with
// |y| <= 1/n are dropped and their mean on (1/n, 1) is subtracted as a
// drift, so L^n(t) = (a - m_n) t + W_q(t) + sum of the recorded jumps.
// Finite-activity measures are simulated without truncation.

#include "hjmm/levy_model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hjmm {

struct SimConfig {
    double t_star = 1.0;
    double dt = 1.0 / 64.0;
    int n_threshold = 1000;
    std::uint64_t seed = 0;
    std::size_t max_jumps = 1000000;
};

struct Jump {
    double time = 0.0;
    double size = 0.0;
};

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LevyPathRecord {
    double t_star = 0.0;
    double dt = 0.0;
    std::vector<double> grid_values;           // L(t_i), t_i = i dt
    std::vector<double> brownian_increments;   // Gaussian part over [t_i, t_{i+1}]
    std::vector<Jump> jumps;                   // sorted by time
    double compensator = 0.0;                  // m_n
    double threshold = 0.0;                    // jumps satisfy |y| > threshold
    LevyModel model;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;

    std::size_t steps() const { return grid_values.empty() ? 0 : grid_values.size() - 1; }
    // continuous part (a - m_n) t + W_q(t), linear between grid nodes
    double continuous_at(double t) const;
    double value_at(double t) const;
    double value_at_left_limit(double t) const;
};

// Generator contract recorded next to every seed in outputs.
std::string_view rng_algorithm_id();

// int_{1/n < |y| < 1} y nu(dy)
double compensator_m_n(const LevyModel& m, int n_threshold);
// 1/n for infinite-activity measures, 0 otherwise
double effective_threshold(const LevyModel& m, int n_threshold);
// int_{thr < |y| < 1} y nu(dy)
double compensator_for_threshold(const LevyModel& m, double thr);

// number of dt-steps in t_star; throws unless dt divides t_star
std::size_t grid_steps(double t_star, double dt);

LevyPathRecord simulate(const LevyModel& m, const SimConfig& cfg, std::uint64_t path_index = 0);

// Path from given increments of the Gaussian part and jumps.
LevyPathRecord make_path(const LevyModel& m, double t_star, double dt,
                         std::vector<double> brownian_increments, std::vector<Jump> jumps,
                         double compensator = 0.0);

// Moves every jump time up to the next multiple of `step` and rebuilds the
// grid values.
void align_jump_times(LevyPathRecord& path, double step);

}  // namespace hjmm
