#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace fracreach {

// Coefficient vector of a state in the Dirichlet sine basis on (0, pi);
// entry n-1 multiplies w_n(x) = sqrt(2/pi) sin(n x).
using SpectralState = Eigen::VectorXd;

// The Dirichlet Laplacian on (0, pi), diagonal in the sine basis with
// eigenvalues -n^2.  Truncation order n_modes fixes every vector length
// downstream.
struct SpectralOperator {
    int n_modes;

    explicit SpectralOperator(int n) : n_modes(n) {
        if (n < 1)
            throw std::invalid_argument("SpectralOperator: need at least one mode");
    }
    double eigenvalue(int n) const { return -static_cast<double>(n) * n; }
};

// L2 projection of f onto the first n_modes sine modes by composite Simpson
// with panels_per_mode * n_modes panels (kept even by construction).
SpectralState project(const std::function<double(double)>& f,
                      const SpectralOperator& op, int panels_per_mode = 8);

// Pointwise evaluation sum_n c_n w_n(x).
double reconstruct(const SpectralState& c, double x);

// (-Laplacian)^q applied diagonally: scales mode n by n^{2q}.  Negative q
// gives the smoothing inverse powers used by the solvability estimates.
SpectralState frac_power_apply(const SpectralState& c, double q);

// Fractional Sobolev norm sqrt(sum_n n^{4q} c_n^2); q = 0 is plain L2.
double norm_q(const SpectralState& c, double q);

// Fraction of the L2 mass carried by the last quarter of the retained modes.
// A large value means the truncation is eating the state; callers report it
// rather than silently accepting the projection.
double tail_fraction(const SpectralState& c);

}  // namespace fracreach
