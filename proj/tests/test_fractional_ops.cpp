#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracreach/fractional_ops.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

using namespace fracreach;

namespace {

SampledSignal sample(const TimeGrid& grid,
                     const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (int k = 0; k <= grid.n_steps; ++k) v[k] = f(grid.node(k));
    return {grid, std::move(v)};
}

SpectralState unit_mode(int n_modes, int n) {
    SpectralState e = SpectralState::Zero(n_modes);
    e[n - 1] = 1.0;
    return e;
}

}  // namespace

TEST_CASE("fractional integral matches monomial closed forms") {
    // I^a 1 = t^a / Gamma(1+a) and I^a t = t^{1+a} / Gamma(2+a); both
    // integrands are piecewise linear, so the product rule is exact.
    for (double alpha : {0.3, 0.5, 0.8}) {
        const FractionalOrder order(alpha);
        const TimeGrid grid(1.0, 64);
        const SampledSignal one = sample(grid, [](double) { return 1.0; });
        const SampledSignal ramp = sample(grid, [](double t) { return t; });
        const SampledSignal i_one = frac_integral(order, one);
        const SampledSignal i_ramp = frac_integral(order, ramp);
        CHECK(i_one.values[0] == 0.0);
        for (int k = 1; k <= grid.n_steps; ++k) {
            const double t = grid.node(k);
            const double e1 = std::pow(t, alpha) / gamma_fn(1.0 + alpha);
            const double e2 = std::pow(t, 1.0 + alpha) / gamma_fn(2.0 + alpha);
            CHECK(std::abs(i_one.values[k] - e1) <= 1e-13 * std::max(1.0, e1));
            CHECK(std::abs(i_ramp.values[k] - e2) <= 1e-13 * std::max(1.0, e2));
        }
    }
    // Frozen endpoint value: I^{1/2} t at t = 1 equals 1/Gamma(5/2).
    const SampledSignal ramp = sample(TimeGrid(1.0, 64), [](double t) { return t; });
    CHECK(frac_integral(FractionalOrder(0.5), ramp).values[64] ==
          doctest::Approx(0.75225277806367504926).epsilon(1e-13));
}

TEST_CASE("L1 derivative is exact on piecewise-linear signals") {
    // D^a t = t^{1-a} / Gamma(2-a); the L1 scheme differentiates the linear
    // interpolant, so on f(t) = t the discrete sum telescopes to the exact
    // value at every node.
    const FractionalOrder order(0.5);
    const TimeGrid grid(1.0, 32);
    const SampledSignal ramp = sample(grid, [](double t) { return t; });
    const SampledSignal d = caputo_derivative(order, ramp);
    CHECK(d.values[0] == 0.0);
    for (int k = 1; k <= grid.n_steps; ++k) {
        const double expected = std::sqrt(grid.node(k)) / gamma_fn(1.5);
        CHECK(std::abs(d.values[k] - expected) <= 1e-12 * expected);
    }
    // Frozen endpoint value: D^{1/2} t at t = 1 equals 1/Gamma(3/2).
    CHECK(d.values[32] == doctest::Approx(1.1283791670955125739).epsilon(1e-13));
}

TEST_CASE("L1 derivative converges at order 2 - alpha on smooth signals") {
    // D^{1/2} t^2 at t = 1 is 2/Gamma(5/2); the L1 truncation error for a C^2
    // signal scales like h^{2-a} = h^{1.5} here.
    const double exact = 1.5045055561273500985;
    auto error_at = [&](int ns) {
        const TimeGrid grid(1.0, ns);
        const SampledSignal f = sample(grid, [](double t) { return t * t; });
        return std::abs(
            caputo_derivative(FractionalOrder(0.5), f).values[ns] - exact);
    };
    const double e1 = error_at(128);
    const double e2 = error_at(256);
    CHECK(e2 <= 2e-3);
    CHECK(std::log2(e1 / e2) >= 1.3);
}

TEST_CASE("alpha = 1 degenerates to the backward difference") {
    const TimeGrid grid(1.0, 16);
    const SampledSignal f = sample(grid, [](double t) { return t * t; });
    const SampledSignal d = caputo_derivative(FractionalOrder(1.0), f);
    for (int k = 1; k <= grid.n_steps; ++k) {
        const double expected = grid.node(k) + grid.node(k - 1);
        CHECK(d.values[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("the L1 derivative inverts the fractional integral") {
    // D^a I^a f = f for continuous f; both sides are discretised here, so the
    // identity holds up to a truncation error that must shrink under grid
    // refinement.
    const FractionalOrder order(0.6);
    auto error_at = [&](int ns) {
        const TimeGrid grid(1.0, ns);
        const SampledSignal f = sample(grid, [](double t) { return std::sin(t); });
        const SampledSignal round = caputo_derivative(order, frac_integral(order, f));
        double worst = 0.0;
        for (int k = 1; k <= ns; ++k)
            worst = std::max(worst, std::abs(round.values[k] - f.values[k]));
        return worst;
    };
    const double e1 = error_at(256);
    const double e2 = error_at(512);
    CHECK(e1 <= 5e-3);
    CHECK(e2 / e1 <= 0.75);
}

TEST_CASE("propagators match frozen transform values") {
    const SpectralOperator op(4);
    // S factors at t = 1 are E_a(-n^2); the n = 1 and n = 2 values sit on
    // opposite sides of the series/integral seam for alpha = 1/2.
    {
        const FractionalOrder order(0.5);
        const SpectralState s1 = s_alpha_apply(op, order, 1.0, unit_mode(4, 1));
        const SpectralState s2 = s_alpha_apply(op, order, 1.0, unit_mode(4, 2));
        CHECK(s1[0] == doctest::Approx(0.42758357615580700441).epsilon(1e-12));
        CHECK(s2[1] == doctest::Approx(0.13699945762506138989).epsilon(5e-11));
    }
    {
        const SpectralState s = s_alpha_apply(op, FractionalOrder(0.3), 1.0,
                                              unit_mode(4, 1));
        CHECK(s[0] == doctest::Approx(0.45659440832969067062).epsilon(1e-12));
    }
    {
        const SpectralState s = s_alpha_apply(op, FractionalOrder(0.9), 1.0,
                                              unit_mode(4, 1));
        CHECK(s[0] == doctest::Approx(0.37606602142464187902).epsilon(1e-12));
    }
    // T factor at t = 4, n = 1 for alpha = 1/2 is E_{1/2,1/2}(-2).
    {
        const FractionalOrder order(0.5);
        const SpectralState t4 = t_alpha_apply(op, order, 4.0, unit_mode(4, 1));
        CHECK(t4[0] == doctest::Approx(0.053398230926744799218).epsilon(1e-12));
        const SpectralState at4 =
            a_t_alpha_apply(op, order, 4.0, unit_mode(4, 1));
        CHECK(at4[0] ==
              doctest::Approx(-0.053398230926744799218).epsilon(1e-12));
        // Deep-argument value through the integral representation.
        const SpectralState t900 =
            t_alpha_apply(op, order, 900.0, unit_mode(4, 1));
        CHECK(t900[0] ==
              doctest::Approx(0.00031291770525374203432).epsilon(1e-10));
    }
    // alpha = 1 collapses both families to the heat semigroup.
    {
        const FractionalOrder order(1.0);
        const SpectralState ones = SpectralState::Ones(4);
        const SpectralState s = s_alpha_apply(op, order, 0.3, ones);
        const SpectralState t = t_alpha_apply(op, order, 0.3, ones);
        for (int n = 1; n <= 4; ++n) {
            const double expected = std::exp(-n * n * 0.3);
            CHECK(s[n - 1] == doctest::Approx(expected).epsilon(1e-13));
            CHECK(t[n - 1] == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("time-zero behaviour: S is the identity, T carries 1/Gamma(alpha)") {
    const SpectralOperator op(6);
    const SpectralState ones = SpectralState::Ones(6);
    for (double alpha : {0.3, 0.5, 0.9, 1.0}) {
        const FractionalOrder order(alpha);
        const SpectralState s0 = s_alpha_apply(op, order, 0.0, ones);
        const SpectralState t0 = t_alpha_apply(op, order, 0.0, ones);
        const double rg = reciprocal_gamma(alpha);
        for (int i = 0; i < 6; ++i) {
            CHECK(s0[i] == 1.0);
            CHECK(t0[i] == doctest::Approx(rg).epsilon(1e-15));
        }
    }
    // Frozen: 1/Gamma(1/2) = 1/sqrt(pi).
    CHECK(t_alpha_apply(op, FractionalOrder(0.5), 0.0, ones)[0] ==
          doctest::Approx(0.56418958354775628695).epsilon(1e-15));
}

TEST_CASE("the propagator table agrees with the pointwise applies") {
    const SpectralOperator op(4);
    const FractionalOrder order(0.5);
    const TimeGrid grid(1.0, 8);
    const PropagatorTable tab = build_propagator_table(op, order, grid);
    REQUIRE(tab.S.rows() == 4);
    REQUIRE(tab.S.cols() == grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        const SpectralState s =
            s_alpha_apply(op, order, grid.node(k), SpectralState::Ones(4));
        const SpectralState t =
            t_alpha_apply(op, order, grid.node(k), SpectralState::Ones(4));
        for (int n = 0; n < 4; ++n) {
            CHECK(tab.S(n, k) == doctest::Approx(s[n]).epsilon(1e-15));
            CHECK(tab.T(n, k) == doctest::Approx(t[n]).epsilon(1e-15));
        }
    }
}

TEST_CASE("strong continuity of S at the origin") {
    const SpectralOperator op(4);
    const SpectralState x = SpectralState::Ones(4);
    for (double alpha : {0.8, 1.0}) {
        const SpectralState s =
            s_alpha_apply(op, FractionalOrder(alpha), 1e-8, x);
        CHECK((s - x).cwiseAbs().maxCoeff() <= 1e-4);
    }
}

TEST_CASE("smoothing bound report") {
    const SpectralOperator op(32);
    const FractionalOrder order(0.5);
    const TimeGrid grid(1.0, 200);
    const SmoothingBoundReport rep = bound_check_smoothing(op, order, grid, 0.5);
    // sup_x sqrt(x) |E_{1/2,1/2}(-x)| is attained near x ~ 1/3 at about 0.19.
    CHECK(rep.empirical_constant > 0.15);
    CHECK(rep.empirical_constant < 0.25);
    CHECK(rep.bounded);
    const double expected_mq = rep.empirical_constant *
                               gamma_fn(1.0 + 0.5 * 0.5) /
                               (0.5 * gamma_fn(1.5));
    CHECK(rep.m_q_estimate == doctest::Approx(expected_mq).epsilon(1e-14));

    CHECK_THROWS_AS(bound_check_smoothing(op, order, grid, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(bound_check_smoothing(op, order, grid, -0.1),
                    std::invalid_argument);
}

TEST_CASE("operator argument validation") {
    const SpectralOperator op(4);
    const FractionalOrder order(0.5);
    CHECK_THROWS_AS(s_alpha_apply(op, order, 1.0, SpectralState::Ones(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(t_alpha_apply(op, order, -1.0, SpectralState::Ones(4)),
                    std::invalid_argument);
    const TimeGrid grid(1.0, 4);
    CHECK_THROWS_AS(SampledSignal(grid, std::vector<double>(3, 0.0)),
                    std::invalid_argument);
}
