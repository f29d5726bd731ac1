#pragma once

#include "fracreach/quadrature.hpp"
#include "fracreach/spectral.hpp"
#include "fracreach/special_functions.hpp"
#include "fracreach/time_grid.hpp"

#include <Eigen/Dense>

namespace fracreach {

// Riemann-Liouville integral I^alpha f on the grid nodes via the product
// trapezoid weights; (I^alpha f)(0) = 0 by convention.
SampledSignal frac_integral(const FractionalOrder& order,
                            const SampledSignal& f);

// Caputo derivative by the L1 scheme, i.e. I^{1-alpha} applied to the
// piecewise-constant finite-difference derivative:
//   D^a f(t_k) ~= h^{-a}/Gamma(2-a) sum_{j<k} b_{k-j} (f_{j+1} - f_j),
//   b_m = m^{1-a} - (m-1)^{1-a}.
// Defined for k >= 1; slot 0 is stored as 0.  alpha = 1 degenerates to the
// backward difference quotient.
SampledSignal caputo_derivative(const FractionalOrder& order,
                                const SampledSignal& f);

// Fractional propagators, diagonal in the sine basis:
//   S_alpha(t): mode n scaled by E_alpha(-n^2 t^alpha)
//   T_alpha(t): mode n scaled by E_{alpha,alpha}(-n^2 t^alpha)
//   A T_alpha(t): additionally scaled by -n^2.
// T_alpha(0) returns 1/Gamma(alpha) per mode (= 1 only at alpha = 1); the
// integrable (t-s)^{alpha-1} factor it pairs with lives in the quadrature
// weights, never here.
SpectralState s_alpha_apply(const SpectralOperator& op,
                            const FractionalOrder& order, double t,
                            const SpectralState& x);
SpectralState t_alpha_apply(const SpectralOperator& op,
                            const FractionalOrder& order, double t,
                            const SpectralState& x);
SpectralState a_t_alpha_apply(const SpectralOperator& op,
                              const FractionalOrder& order, double t,
                              const SpectralState& x);

// Both propagator families tabulated on a grid: column k of S (resp. T)
// holds the per-mode factors at t_k.  The Gramian assembly and the mild
// solution both read from tables built by this one routine, so the discrete
// steering identity holds to round-off rather than to quadrature error.
struct PropagatorTable {
    Eigen::MatrixXd S;  // n_modes x (n_steps+1)
    Eigen::MatrixXd T;
};

PropagatorTable build_propagator_table(const SpectralOperator& op,
                                       const FractionalOrder& order,
                                       const TimeGrid& grid);

// Empirical check of the smoothing estimate
//   ||A^q T_alpha(t)|| <= alpha M_q Gamma(2-q) / Gamma(1+alpha(1-q)) t^{-alpha q}.
// empirical_constant is sup over retained modes and positive grid nodes of
// n^{2q} t^{alpha q} |E_{alpha,alpha}(-n^2 t^alpha)|; m_q_estimate backs the
// constant M_q out of it.  bounded reports whether the sup stabilised rather
// than growing with the mode index (truncation sanity).
struct SmoothingBoundReport {
    double q;
    double empirical_constant;
    double m_q_estimate;
    bool bounded;
};

SmoothingBoundReport bound_check_smoothing(const SpectralOperator& op,
                                           const FractionalOrder& order,
                                           const TimeGrid& grid, double q);

}  // namespace fracreach
