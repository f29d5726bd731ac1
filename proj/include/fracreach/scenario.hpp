#pragma once

#include "fracreach/gramian.hpp"
#include "fracreach/spectral.hpp"
#include "fracreach/time_grid.hpp"

#include <string>
#include <vector>

namespace fracreach {

// Configs carry registry names plus numeric parameters, never code.  Every
// descriptor below validates its own kind string on use, so a typo in a
// config file fails loudly at load time.

// Time re-map sigma(t) for delayed state sampling.  eval() clamps into
// [0, t] by construction: no descriptor, however configured, can reach into
// the future or before the initial time.
struct DelayDescriptor {
    std::string kind = "identity";  // identity | sin_sq | scale | overshoot
    double scale = 1.0;

    double raw(double t) const;
    double eval(double t) const;
};

// Reaction term g(t, w) = scale * x * atan(w(x)) collocated in space and
// projected back onto the retained modes; kind "zero" switches it off.  The
// Lipschitz constant in L2 is bounded by scale * pi.
struct ReactionDescriptor {
    std::string kind = "zero";  // zero | x_atan
    double scale = 0.0;
};

// Nonlocal initial coupling h(u) = sum_i weight_i * u(time_i).
struct NonlocalTerm {
    double weight = 0.0;
    double time = 0.0;
};
struct NonlocalDescriptor {
    std::vector<NonlocalTerm> terms;
};

// Forcing families:
//   memory_exp  - set-valued memory forcing; the selections are
//                   t -> m * int_0^t k(t,s) exp(xi(x, sin s)) ds - xi(x, t),
//                 with the multiplier m ranging over [band_lo, band_hi] and
//                 xi(x, y) = xi_scale * x * sin(y) the reference shape the
//                 composite is anchored to.  `selection` picks the sample the
//                 solver uses; "midpoint" takes m = (band_lo + band_hi)/2.
//   fixed_modal - prescribed per-mode signals
//                   v_n(t) = c1 cos(t)/n + c2 sin(0.7 n) e^{-t}.
//   zero        - no forcing.
struct ForcingDescriptor {
    std::string kind = "zero";        // zero | memory_exp | fixed_modal
    std::string kernel = "constant";  // constant | exp_decay   (memory_exp)
    double kernel_rate = 1.0;         // k(t,s) = exp(-rate (t-s))
    double band_lo = 1.0;
    double band_hi = 1.0;
    std::string selection = "midpoint";  // midpoint | lower | upper
    double xi_scale = 0.5;
    double c1 = 1.0, c2 = 0.3;  // fixed_modal coefficients

    double band_multiplier() const;  // resolves `selection` within the band
};

struct ControlDescriptor {
    std::string kind = "coupled";  // coupled | identity | zero | matrix
    std::vector<double> entries;   // row-major payload when kind == "matrix"
    int rows = 0, cols = 0;

    ControlOperator build(int n_modes) const;
};

struct Scenario {
    double alpha = 0.5;
    int n_modes = 16;
    int n_steps = 256;
    double horizon = 1.0;
    double p = 0.5;  // smoothing index of the solvability estimate
    double q = 0.1;  // Sobolev index of the working norm
    double lambda = 1e-2;
    double tolerance = 1e-8;
    int max_iterations = 200;

    DelayDescriptor state_delay;    // sigma(t) inside the reaction term
    DelayDescriptor forcing_delay;  // delta(t) the forcing is composed with
    ReactionDescriptor reaction;
    NonlocalDescriptor nonlocal;
    ForcingDescriptor forcing;
    ControlDescriptor b1;  // running control
    ControlDescriptor b2;  // one-shot control through the initial datum

    std::vector<double> u0_coeffs;      // padded with zeros to n_modes
    std::vector<double> target_coeffs;  // ditto
    std::vector<double> sweep_lambdas = {1.0,  1e-1, 1e-2, 1e-3,
                                         1e-4, 1e-5, 1e-6};

    void validate() const;

    FractionalOrder order() const { return FractionalOrder(alpha); }
    TimeGrid grid() const { return TimeGrid(horizon, n_steps); }
    SpectralOperator op() const { return SpectralOperator(n_modes); }
    SpectralState u0() const;
    SpectralState target() const;
};

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

}  // namespace fracreach
