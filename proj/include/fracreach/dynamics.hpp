#pragma once

#include "fracreach/gramian.hpp"
#include "fracreach/scenario.hpp"

#include <optional>
#include <vector>

namespace fracreach {

struct Trajectory {
    TimeGrid grid{1.0, 2};  // placeholder until a solver fills the object
    std::vector<SpectralState> states;  // one per grid node
};

// Everything a solve needs that depends only on the scenario's discretization:
// propagator tables and convolution weights are built once here and shared by
// the Gramian assembly, the control synthesis and the mild solution, so the
// discrete steering identity holds to round-off.
struct DiscreteModel {
    Scenario scen;
    FractionalOrder order;
    SpectralOperator op;
    TimeGrid grid;
    ControlOperator b1, b2;
    PropagatorTable table;
    ConvolutionWeights weights;
    Gramian gramian_running;
    Gramian gramian_initial;

    static DiscreteModel build(const Scenario& s);
};

// Trajectory value at the clamped delayed time sigma(t), linearly
// interpolated between grid nodes.
SpectralState delayed_sample(const Trajectory& traj, const DelayDescriptor& d,
                             double t);

// Reaction term g(t, w) projected onto the retained modes; w is the
// (already delayed) state.  Collocation uses 8 panels per mode.
SpectralState eval_reaction(const Scenario& scen, const SpectralOperator& op,
                            double t, const SpectralState& w);

// Nonlocal initial coupling h(u) = sum_i weight_i u(time_i), interpolated on
// the trajectory.
SpectralState eval_nonlocal(const Scenario& scen, const Trajectory& traj);

// The sampled forcing selection w(t) = v(delta(t)) as a mode vector.  For the
// memory family the inner s-integral runs over grid nodes restricted to
// [0, delta(t)] by composite trapezoid (partial last panel included), the
// spatial profile is collocated and projected.  Iterate-independent, so
// solvers evaluate it once per scenario.
std::vector<SpectralState> eval_forcing_selection(const Scenario& scen,
                                                  const SpectralOperator& op,
                                                  const TimeGrid& grid);

struct ControlPair {
    std::vector<Eigen::VectorXd> mu1;  // channel-space value at each node
    Eigen::VectorXd mu2;               // channel-space one-shot value
    double lambda = 0.0;
    Eigen::VectorXd defect;            // terminal defect the resolvent acted on
    ResolventDiagnostics diag;
    double mu1_energy = 0.0;  // discrete L2-in-time energy of mu1
    double mu2_norm = 0.0;
};

// One application of the solution map to the frozen trajectory:
//   u(t_k) = S(t_k) [B2 mu2 + u0 - h(frozen) - g(0, frozen)]
//            + g(t_k, frozen) + sum_{j<=k} W[k][j] T(t_k - t_j)
//                [A g(t_j, frozen) + w(t_j) + B1 mu1(t_j)].
// At k = 0 the S and integral terms collapse and the identity
// u(0) = B2 mu2 + u0 - h(frozen) holds exactly, whatever the frozen iterate.
Trajectory mild_solution(const DiscreteModel& m, const Trajectory& frozen,
                         const ControlPair* controls,
                         const std::vector<SpectralState>& forcing);

// Explicit approximate-control law at the frozen iterate: the terminal defect
// P (target minus the uncontrolled terminal value) is fed through the
// resolvent of the combined Gramian,
//   c = (lambda I + G_run + G_init)^{-1} P,
//   mu1(t_j) = B1^T T(a - t_j) c,   mu2 = B2^T S(a) c,
// after which the discrete terminal error equals lambda (lambda I + G)^{-1} P
// exactly.
ControlPair synthesize_controls(const DiscreteModel& m,
                                const Trajectory& frozen,
                                const std::vector<SpectralState>& forcing,
                                double lambda);

struct ContractionReport {
    double lipschitz_l1 = 0.0;      // reaction Lipschitz constant
    double empirical_constant = 0.0;  // sup n^{2(1-p)} t^{a(1-p)} |E_aa|
    double m_smoothing = 0.0;       // M_{1-p} backed out of the sup
    double k_estimate = 0.0;        // contraction constant of the solution map
    bool contractive = false;       // k_estimate < 1
};

ContractionReport contraction_estimate(const DiscreteModel& m);

struct FixedPointReport {
    Trajectory trajectory;
    ControlPair controls;
    bool converged = false;
    int iterations = 0;
    std::vector<double> update_norms;  // sup-in-time H_q norm of each update
    double relaxation = 1.0;           // halved once if updates diverge
    SpectralState h_frozen;            // h evaluated at the final frozen iterate
    double nonlocal_residual = 0.0;    // ||u(0)+h_frozen-B2 mu2-u0||, ~round-off
    double terminal_error = 0.0;       // ||u(a) - target|| in L2
    ContractionReport contraction;
};

FixedPointReport fixed_point_solve(const Scenario& scen);
FixedPointReport fixed_point_solve(const DiscreteModel& m,
                                   const std::vector<SpectralState>& forcing,
                                   double lambda);

struct ResidualReport {
    std::vector<int> modes;            // mode indices checked (n <= n_modes/4)
    std::vector<double> interior_sup;  // sup |r_n| over nodes in [0.05a, 0.95a]
    std::vector<double> full_sup;      // sup over all nodes k >= 1
    bool constant_trajectory = false;  // then the residual measures imbalance
};

// Strong-form consistency: r_n(t_k) = D^alpha[u_n - g_n](t_k) + n^2 u_n(t_k)
// - w_n(t_k) - (B1 mu1(t_k))_n via the L1 Caputo stencil.  The interior
// window excludes the initial layer (where the L1 stencil sees the t^alpha
// kink) and the terminal node (where the synthesized control has an
// (a-t)^alpha kink); the full-range sup is reported alongside as a
// diagnostic, not a gate.
ResidualReport residual_check(const DiscreteModel& m, const Trajectory& traj,
                              const ControlPair* controls,
                              const std::vector<SpectralState>& forcing);

}  // namespace fracreach
