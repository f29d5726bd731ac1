#pragma once

#include "fracreach/fractional_ops.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fracreach {

// Input operator mapping control channels into sine-mode space.
struct ControlOperator {
    Eigen::MatrixXd m;  // n_modes x n_channels

    // Worked-example operator: channel j drives mode j+2 with unit gain, and
    // the first channel additionally drives mode 1 with gain 2.  Its range is
    // the hyperplane {x : x_1 = 2 x_2}, so B B* is singular with kernel
    // direction (1, -2, 0, ...) - deliberately not exactly controllable.
    static ControlOperator coupled(int n_modes);
    static ControlOperator identity(int n_modes);
    static ControlOperator zero(int n_modes);

    int n_modes() const { return static_cast<int>(m.rows()); }
    int n_channels() const { return static_cast<int>(m.cols()); }
};

struct Gramian {
    Eigen::MatrixXd m;
    double horizon = 0.0;
    double alpha = 0.0;
    std::string kind;  // "running" or "initial"
};

// Gramian of the control acting along the whole window through T_alpha:
//   G = sum_j rows[ns][j] diag(T(:,ns-j)) B B^T diag(T(:,ns-j)).
// The same weight row and propagator table drive the mild solution, which is
// what makes the discrete steering identity exact.  Symmetrised after
// assembly.
Gramian build_running_gramian(const ControlOperator& b,
                              const FractionalOrder& order,
                              const PropagatorTable& table,
                              const ConvolutionWeights& weights);

// Gramian of the one-shot control entering through the initial datum and
// propagated to the horizon by S_alpha: G = diag(S(:,ns)) B B^T diag(S(:,ns)).
Gramian build_initial_gramian(const ControlOperator& b,
                              const FractionalOrder& order,
                              const PropagatorTable& table, double horizon);

struct ResolventDiagnostics {
    double residual_norm = 0.0;      // ||(lambda I + G)x - rhs|| / ||rhs||
    double condition_estimate = 0.0;
    bool ill_conditioned = false;    // condition_estimate > 1e12; still solved
};

// Solves (lambda I + G) x = rhs by LDLT with one step of iterative
// refinement.  Ill conditioning is reported, never fatal: the vanishing-
// viscosity sweep lives exactly where the system is nearly singular.
Eigen::VectorXd resolvent_apply(double lambda, const Eigen::MatrixXd& gram,
                                const Eigen::VectorXd& rhs,
                                ResolventDiagnostics* diag = nullptr);
Eigen::VectorXd resolvent_apply(double lambda, const Gramian& gram,
                                const Eigen::VectorXd& rhs,
                                ResolventDiagnostics* diag = nullptr);

// lambda ||R(lambda; G) x|| along a descending lambda ladder.  Vanishing of
// this sequence is the operative approximate-reachability certificate for
// the direction x; "decaying" demands the final value drop below one tenth
// of the first.
struct DecayProbe {
    std::vector<double> lambdas;
    std::vector<double> values;
    bool decaying = false;
};

DecayProbe resolvent_decay(const Eigen::MatrixXd& gram,
                           const Eigen::VectorXd& x,
                           const std::vector<double>& lambdas);

// Row-major JSON round trip with enough metadata to rebuild the object.
std::string gramian_to_json(const Gramian& g);
Gramian gramian_from_json(const std::string& text);

}  // namespace fracreach
