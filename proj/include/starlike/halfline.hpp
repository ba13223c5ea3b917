// halfline.hpp - half-line eigenvalue recursion, Jitomirskaya-Last norms,
// subordinacy diagnostics and the Weyl m-function.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "starlike/graph.hpp"

namespace starlike {

// Solution of a(n) g(n-1) + b(n) g(n) + a(n+1) g(n+1) = E g(n) for n >= 1.
// Values are stored scaled, g(n) = val[n] * exp(logsc[n]), with the scale
// renormalized every 64 steps so exponentially growing solutions remain
// representable.
struct HalfLineSolution {
    double energy = 0.0;
    std::vector<double> val;
    std::vector<double> logsc;

    int horizon() const { return static_cast<int>(val.size()) - 1; }
    double value(int n) const;    // may overflow for strongly growing solutions
    double log_abs(int n) const;  // -inf at exact zeros
};

// Boundary condition (g(0), g(1)) = (-sin theta, cos theta).
HalfLineSolution solve(const BranchCoefficients& c, double E, double theta, int horizon);
HalfLineSolution solve_initial(const BranchCoefficients& c, double E, double g0, double g1,
                               int horizon);

// Step matrix taking (g(n-1), g(n)) to (g(n), g(n+1)); det = a(n)/a(n+1).
Eigen::Matrix2d transfer(const BranchCoefficients& c, double E, int n);

// ||g||_L^2 = sum_{k=1}^{floor(L)} g(k)^2 + (L - floor(L)) g(floor(L)+1)^2.
double jl_norm(const HalfLineSolution& g, double L);
double jl_norm_log(const HalfLineSolution& g, double L);

double subordinacy_ratio(const BranchCoefficients& c, double E, double theta, double eta,
                         double L);

struct SubordinateDirection {
    double theta = 0.0;      // boundary angle in [0, pi) minimizing the JL norm
    double condition = 0.0;  // smallest/largest eigenvalue of the length-L Gram matrix
};

SubordinateDirection subordinate_direction(const BranchCoefficients& c, double E, double L);

// <delta_1, (J0 - z)^{-1} delta_1> via the downward continued fraction
// m_n = 1 / (b(n) - z - a(n+1)^2 m_{n+1}), evaluation depth doubled until
// successive values agree within tol (relative above magnitude one).
std::complex<double> m_function(const BranchCoefficients& c, std::complex<double> z,
                                double tol = 1e-12, long depth_cap = 1L << 20,
                                long start_depth = 64, long* used_depth = nullptr);

}  // namespace starlike
