#pragma once
// Fields on the aligned grid t_i = i h, x_j = j h (dt = dx = h).
// Reaching (t_i, x_j) for i <= nt, j <= nx through the integral equation
// reads earlier rows up to x = t_i + x_j, so row i is stored on
// j = 0 .. N - i with N = nt + nx.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace hjmm {

struct Grid {
    double h = 0.0;
    std::size_t nt = 0;
    std::size_t nx = 0;

    // throws unless h divides both horizons
    static Grid make(double t_star, double x_max, double h);

    std::size_t N() const { return nt + nx; }
    std::size_t extent(std::size_t i) const { return N() - i + 1; }
    double t(std::size_t i) const { return static_cast<double>(i) * h; }
    double x(std::size_t j) const { return static_cast<double>(j) * h; }
    double t_star() const { return t(nt); }
    double x_max() const { return x(nx); }
    bool operator==(const Grid& o) const { return h == o.h && nt == o.nt && nx == o.nx; }
};

class Field {
public:
    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0);

    const Grid& grid() const { return grid_; }
    std::span<double> row(std::size_t i) { return {data_.data() + offset_[i], grid_.extent(i)}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + offset_[i], grid_.extent(i)}; }
    double& operator()(std::size_t i, std::size_t j) { return data_[offset_[i] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[offset_[i] + j]; }
    std::span<const double> flat() const { return data_; }
    std::span<double> flat() { return data_; }

    // sup |f| over the full storage (NaN if any entry is NaN)
    double sup_norm() const;
    // sup |f| on i <= nt, j <= nx
    double sup_norm_output() const;
    double min() const;

private:
    Grid grid_;
    std::vector<double> data_;
    std::vector<std::size_t> offset_;
};

// sup |a - b| over the full storage
double sup_distance(const Field& a, const Field& b);
// sup |a - b| on the output rectangle
double sup_distance_output(const Field& a, const Field& b);

}  // namespace hjmm
