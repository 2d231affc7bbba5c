#pragma once
// Laplace exponent J(z) = log E e^{-z L(1)} and its first two derivatives,
// evaluated piecewise over y <= -1, (-1,0), (0,1), y >= 1.

#include "hjmm/levy_model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hjmm {

struct ExponentPieces {
    double drift = 0.0;  // -a z, -a, 0
    double gauss = 0.0;  // q z^2 / 2, q z, q
    double j1 = 0.0;     // y <= -1
    double j2 = 0.0;     // -1 < y < 0
    double j3 = 0.0;     // 0 < y < 1
    double j4 = 0.0;     // y >= 1
    double total() const;
};

// Thrown when a J' value needed by the solver is infinite.
class ExponentDomainError : public std::domain_error {
public:
    ExponentDomainError(const std::string& what, double z) : std::domain_error(what), z_(z) {}
    double z() const { return z_; }

private:
    double z_;
};

ExponentPieces J_pieces(const LevyModel& m, double z);
ExponentPieces J_prime_pieces(const LevyModel& m, double z);
ExponentPieces J_second_pieces(const LevyModel& m, double z);

double eval_J(const LevyModel& m, double z);
double eval_J_prime(const LevyModel& m, double z);
double eval_J_second(const LevyModel& m, double z);

// sup { z >= 0 : J(z) < inf }. J(domain_sup) itself may be infinite.
double exponent_domain_sup(const LevyModel& m);

// J' for repeated evaluation inside the solver. Drift, Gaussian and atom
// contributions are evaluated exactly; density parts are read from a cubic
// Hermite table in s = log(1+z) that grows on demand. Not thread-safe.
class JPrimeTable {
public:
    explicit JPrimeTable(const LevyModel& m, double step = 1.0 / 64.0);

    double operator()(double z);
    const LevyModel& model() const { return model_; }

private:
    void extend_to(double s);
    double table_value(double z);

    LevyModel model_;
    LevyModel exact_;
    LevyModel dens_;
    bool has_dens_ = false;
    double zsup_ = kInf;
    double h_;
    std::vector<double> g_;   // J'_dens at node k
    std::vector<double> dg_;  // d/ds J'_dens at node k
};

}  // namespace hjmm
