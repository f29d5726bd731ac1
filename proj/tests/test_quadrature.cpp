#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracreach/quadrature.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

using namespace fracreach;

namespace {

std::vector<double> sample_on_grid(const TimeGrid& grid,
                                   const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (int k = 0; k <= grid.n_steps; ++k) v[k] = f(grid.node(k));
    return v;
}

}  // namespace

TEST_CASE("weights reproduce the Beta closed forms on linear integrands") {
    // The rule integrates the kernel against the piecewise-linear interpolant
    // exactly, so on phi(s) = c0 + c1 s it must agree with
    //   c0 t^a / a + c1 t^{a+1} / (a (a+1))
    // to round-off for every node, order, and grid.
    std::mt19937 rng(814261u);
    std::uniform_real_distribution<double> alpha_draw(0.15, 1.0);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> horizon_draw(0.3, 2.5);
    std::uniform_int_distribution<int> steps_draw(8, 64);

    for (int trial = 0; trial < 100; ++trial) {
        const FractionalOrder order(alpha_draw(rng));
        const TimeGrid grid(horizon_draw(rng), steps_draw(rng));
        const double c0 = coeff(rng);
        const double c1 = coeff(rng);
        const ConvolutionWeights w = build_weights(order, grid);
        const auto samples =
            sample_on_grid(grid, [&](double s) { return c0 + c1 * s; });

        std::uniform_int_distribution<int> node_draw(1, grid.n_steps);
        const int k = node_draw(rng);
        const double t = grid.node(k);
        const double a = order.alpha;
        const double exact = c0 * std::pow(t, a) / a +
                             c1 * std::pow(t, a + 1.0) / (a * (a + 1.0));
        const double got = convolve(w, samples, k);
        CHECK(std::abs(got - exact) <=
              1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("row sums telescope to t_k^alpha / alpha") {
    for (double alpha : {0.2, 0.5, 0.8, 1.0}) {
        const FractionalOrder order(alpha);
        const TimeGrid grid(1.7, 48);
        const ConvolutionWeights w = build_weights(order, grid);
        for (int k = 0; k <= grid.n_steps; ++k) {
            double sum = 0.0;
            for (double v : w.rows[k]) sum += v;
            const double exact = std::pow(grid.node(k), alpha) / alpha;
            CHECK(std::abs(sum - exact) <= 1e-13 * std::max(1.0, exact));
        }
    }
}

TEST_CASE("weights are nonnegative") {
    // Both panel contributions are integrals of a positive kernel against a
    // nonnegative hat, so no entry may go negative even for small alpha.
    for (double alpha : {0.1, 0.35, 0.7, 1.0}) {
        const ConvolutionWeights w =
            build_weights(FractionalOrder(alpha), TimeGrid(1.0, 96));
        for (const auto& row : w.rows)
            for (double v : row) CHECK(v >= 0.0);
    }
}

TEST_CASE("alpha = 1 reduces to the composite trapezoid rule") {
    const TimeGrid grid(2.0, 10);
    const ConvolutionWeights w = build_weights(FractionalOrder(1.0), grid);
    const double h = grid.h();
    for (int k = 1; k <= grid.n_steps; ++k) {
        CHECK(w.rows[k][0] == doctest::Approx(h / 2.0).epsilon(1e-14));
        CHECK(w.rows[k][k] == doctest::Approx(h / 2.0).epsilon(1e-14));
        for (int j = 1; j < k; ++j)
            CHECK(w.rows[k][j] == doctest::Approx(h).epsilon(1e-14));
    }
}

TEST_CASE("second-order convergence on a smooth integrand") {
    // phi(s) = s^2 against the kernel has the closed form
    //   2 t^{a+2} / (a (a+1) (a+2)),
    // and the interpolation error of the product rule is O(h^2).
    const double alpha = 0.6;
    const double horizon = 1.0;
    const double exact =
        2.0 * std::pow(horizon, alpha + 2.0) /
        (alpha * (alpha + 1.0) * (alpha + 2.0));

    auto error_at = [&](int ns) {
        const TimeGrid grid(horizon, ns);
        const ConvolutionWeights w =
            build_weights(FractionalOrder(alpha), grid);
        const auto samples =
            sample_on_grid(grid, [](double s) { return s * s; });
        return std::abs(convolve(w, samples, ns) - exact);
    };

    const double e1 = error_at(64);
    const double e2 = error_at(128);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 1.8);
    CHECK(e2 < e1);
}

TEST_CASE("vector convolution matches componentwise scalar convolution") {
    const TimeGrid grid(1.0, 24);
    const ConvolutionWeights w = build_weights(FractionalOrder(0.5), grid);
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    std::vector<Eigen::VectorXd> vec_samples(grid.size());
    std::vector<std::vector<double>> comp(3, std::vector<double>(grid.size()));
    for (int k = 0; k <= grid.n_steps; ++k) {
        Eigen::VectorXd v(3);
        for (int i = 0; i < 3; ++i) {
            v[i] = unif(rng);
            comp[i][k] = v[i];
        }
        vec_samples[k] = v;
    }
    const Eigen::VectorXd got = convolve(w, vec_samples, 24);
    for (int i = 0; i < 3; ++i)
        CHECK(got[i] == doctest::Approx(convolve(w, comp[i], 24)).epsilon(1e-14));
}

TEST_CASE("convolve validates its inputs") {
    const TimeGrid grid(1.0, 8);
    const ConvolutionWeights w = build_weights(FractionalOrder(0.5), grid);
    const std::vector<double> samples(grid.size(), 1.0);
    CHECK_THROWS_AS(convolve(w, samples, 9), std::out_of_range);
    CHECK_THROWS_AS(convolve(w, samples, -1), std::out_of_range);
    const std::vector<double> short_samples(3, 1.0);
    CHECK_THROWS_AS(convolve(w, short_samples, 8), std::invalid_argument);
}

TEST_CASE("grid and order validation") {
    CHECK_THROWS_AS(TimeGrid(0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(FractionalOrder(0.0), std::invalid_argument);
    CHECK_THROWS_AS(FractionalOrder(1.1), std::invalid_argument);
}
