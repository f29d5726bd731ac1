#pragma once

#include <stdexcept>

namespace fracreach {

// Fractional order of the evolution equation, restricted to (0, 1].
// The density and subordination formulas additionally require alpha < 1;
// those entry points reject the degenerate endpoint themselves.
struct FractionalOrder {
    double alpha;

    explicit FractionalOrder(double a) : alpha(a) {
        if (!(a > 0.0) || !(a <= 1.0))
            throw std::invalid_argument("fractional order must lie in (0, 1]");
    }
};

// Gamma(x) for real x.  Throws std::domain_error at the poles (x = 0, -1, -2, ...)
// and std::overflow_error once the result no longer fits in double (x > 171.62).
double gamma_fn(double x);

// log Gamma(x) for x > 0.  Tighter than log(gamma_fn(x)) for large x and the
// workhorse behind series terms evaluated in log form.
double log_gamma_pos(double x);

// 1/Gamma(x) as an entire function: returns exact 0 at the poles instead of
// throwing.  Used by asymptotic expansions whose terms legitimately vanish.
double reciprocal_gamma(double x);

enum class MLStrategy {
    series,        // Taylor series sum_k z^k / Gamma(alpha k + beta)
    integral,      // real integral representation on the negative axis
    asymptotic,    // algebraic tail -sum_k z^{-k} / Gamma(beta - alpha k)
    exp_identity,  // closed form available at alpha = 1
};

struct MLDiagnostics {
    MLStrategy strategy = MLStrategy::series;
    int terms = 0;  // series terms summed, or integrand evaluations
};

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) on the real line.
// Supported orders: alpha in (0, 2], beta > 0.  The negative axis is covered
// down to z = -1e6 and beyond with absolute accuracy better than 1e-10; the
// positive axis is served by the Taylor series while it converges and by the
// exponential identities at alpha = 1.  Requests outside any convergent
// strategy throw std::runtime_error; bad (alpha, beta, z) combinations such
// as alpha <= 0 throw std::domain_error.
double mittag_leffler(double alpha, double beta, double z,
                      MLDiagnostics* diag = nullptr);

// One-sided stable (Wright/Mainardi) density zeta_alpha(theta) on [0, inf),
// the subordination kernel linking the fractional propagators to the C0
// semigroup.  Requires alpha < 1: at alpha = 1 the density degenerates to a
// point mass and no pointwise value exists.  theta beyond tail_cutoff is
// evaluated by the same saddle-point tail formula used inside the cutoff, so
// the returned value stays meaningful (it is merely astronomically small).
double wright_density(const FractionalOrder& order, double theta,
                      double tail_cutoff = 40.0);

// Laplace transform of the density, int_0^inf zeta_alpha(theta) e^{-z theta}
// dtheta, computed by direct quadrature against wright_density.  For z >= 0
// this equals E_alpha(-z); the two sides are computed by fully independent
// code paths, which is exactly what makes the identity a usable cross-check.
double density_laplace(const FractionalOrder& order, double z,
                       double tail_cutoff = 40.0);

// k-th moment int_0^inf theta^k zeta_alpha(theta) dtheta.  Closed form is
// Gamma(1+k) / Gamma(1+alpha k); the quadrature route here is the
// independent side of that identity.
double density_moment(const FractionalOrder& order, int k,
                      double tail_cutoff = 40.0);

}  // namespace fracreach
