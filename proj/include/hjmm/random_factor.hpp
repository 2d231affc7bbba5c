#pragma once
// The pathwise random factor
//   a(t,x) = r0(t+x) exp(I1(t,x) - (q/2) int_0^t lambda^2(t-s+x) ds) I2(t,x),
//   I1(t,x) = int_0^t lambda(t-s+x) dL(s),
//   I2(t,x) = prod_{s_j <= t} (1 + lambda(t-s_j+x) y_j) e^{-lambda(t-s_j+x) y_j}.
// The continuous part of I1 is integrated by parts,
//   lambda(x) L^c(t) + int_0^t lambda'(t-s+x) L^c(s) ds,
// with the trapezoid rule on the grid; jumps enter I1 exactly.

#include "hjmm/field.hpp"
#include "hjmm/function_space.hpp"
#include "hjmm/path_sim.hpp"
#include "hjmm/volatility.hpp"

#include <iosfwd>

namespace hjmm {

struct RandomFactorField {
    Grid grid;
    Field I1;
    Field I2;
    Field a;
    Field b;  // a without the r0 factor
    double b_bar = 0.0;
    WeightedCurve r0;
    bool positivity_ok = true;  // every jump factor 1 + lambda y was > 0
    double max_abs_I1 = 0.0;
    double max_abs_I2 = 0.0;
};

Field compute_I1(const LevyPathRecord& path, const Volatility& vol, const Grid& grid);
// second field: false where a factor 1 + lambda y <= 0 occurred
Field compute_I2(const LevyPathRecord& path, const Volatility& vol, const Grid& grid,
                 bool* positivity_ok = nullptr);
// int_0^{t_i} lambda^2(t_i - s + x_j) ds by the trapezoid rule
Field compute_lambda_sq_integral(const Volatility& vol, const Grid& grid);

// r0 must be sampled with dx = grid.h from x = 0 up to at least t* + x_max.
RandomFactorField compute_a(const LevyPathRecord& path, const Volatility& vol, const WeightedCurve& r0,
                            double q, const Grid& grid);

// rows `t,x,I1,I2,a` on i <= nt, j <= nx
void write_factor_csv(std::ostream& os, const RandomFactorField& f);

}  // namespace hjmm
