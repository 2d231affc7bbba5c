#include "hjmm/field.hpp"

#include "hjmm/kernels.hpp"
#include "hjmm/path_sim.hpp"

#include <algorithm>

namespace hjmm {

Grid Grid::make(double t_star, double x_max, double h) {
    Grid g;
    g.h = h;
    g.nt = grid_steps(t_star, h);
    g.nx = grid_steps(x_max, h);
    return g;
}

Field::Field(const Grid& g, double fill) : grid_(g) {
    offset_.resize(g.nt + 1);
    std::size_t total = 0;
    for (std::size_t i = 0; i <= g.nt; ++i) {
        offset_[i] = total;
        total += g.extent(i);
    }
    data_.assign(total, fill);
}

double Field::sup_norm() const {
    return kernels::max_abs(data_);
}

double Field::sup_norm_output() const {
    double m = 0.0;
    for (std::size_t i = 0; i <= grid_.nt; ++i) {
        const double r = kernels::max_abs(row(i).first(grid_.nx + 1));
        if (std::isnan(r)) return r;
        m = std::max(m, r);
    }
    return m;
}

double Field::min() const {
    double m = INFINITY;
    for (double v : data_) m = std::min(m, v);
    return m;
}

double sup_distance(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("sup_distance: grids differ");
    return kernels::max_abs_diff(a.flat(), b.flat());
}

double sup_distance_output(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("sup_distance: grids differ");
    double m = 0.0;
    const std::size_t w = a.grid().nx + 1;
    for (std::size_t i = 0; i <= a.grid().nt; ++i) {
        const double r = kernels::max_abs_diff(a.row(i).first(w), b.row(i).first(w));
        if (std::isnan(r)) return r;
        m = std::max(m, r);
    }
    return m;
}

}  // namespace hjmm
