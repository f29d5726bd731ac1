#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracreach/gramian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace fracreach;

namespace {

struct Setup {
    SpectralOperator op;
    FractionalOrder order;
    TimeGrid grid;
    PropagatorTable table;
    ConvolutionWeights weights;

    Setup(int n_modes, double alpha, double horizon, int n_steps)
        : op(n_modes),
          order(alpha),
          grid(horizon, n_steps),
          table(build_propagator_table(op, order, grid)),
          weights(build_weights(order, grid)) {}
};

}  // namespace

TEST_CASE("alpha = 1 Gramians match the heat-kernel closed forms") {
    // With B = I and alpha = 1 the running Gramian is diagonal with entries
    // (1 - e^{-2 n^2 a}) / (2 n^2) and the initial one has e^{-2 n^2 a}; the
    // discrete assembly (trapezoid weights, exponential propagators) must land
    // on them to O(h^2).
    const Setup s(2, 1.0, 1.0, 1024);
    const ControlOperator b = ControlOperator::identity(2);
    const Gramian run = build_running_gramian(b, s.order, s.table, s.weights);
    const Gramian init = build_initial_gramian(b, s.order, s.table, 1.0);

    CHECK(run.kind == "running");
    CHECK(init.kind == "initial");
    CHECK(run.horizon == 1.0);
    CHECK(run.alpha == 1.0);

    for (int n = 1; n <= 2; ++n) {
        const double g_run = -std::expm1(-2.0 * n * n) / (2.0 * n * n);
        const double g_init = std::exp(-2.0 * n * n);
        CHECK(std::abs(run.m(n - 1, n - 1) - g_run) <= 1e-5 * g_run);
        CHECK(std::abs(init.m(n - 1, n - 1) - g_init) <= 1e-12 * g_init);
    }
    // Frozen endpoint values for the first mode.
    CHECK(run.m(0, 0) == doctest::Approx(0.43233235838169365405).epsilon(1e-5));
    CHECK(init.m(0, 0) ==
          doctest::Approx(0.13533528323661269189).epsilon(1e-12));
    // Identity B keeps both Gramians diagonal.
    CHECK(run.m(0, 1) == 0.0);
    CHECK(init.m(0, 1) == 0.0);
}

TEST_CASE("Gramians are symmetric positive semidefinite") {
    const Setup s(8, 0.5, 1.0, 128);
    const ControlOperator b = ControlOperator::coupled(8);
    for (const Gramian& g :
         {build_running_gramian(b, s.order, s.table, s.weights),
          build_initial_gramian(b, s.order, s.table, 1.0)}) {
        CHECK((g.m - g.m.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.m,
                                                          Eigen::EigenvaluesOnly);
        const double top = es.eigenvalues().maxCoeff();
        CHECK(top > 0.0);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12 * top);
    }
}

TEST_CASE("the coupled operator couples only the first two modes") {
    const ControlOperator b = ControlOperator::coupled(6);
    REQUIRE(b.n_modes() == 6);
    REQUIRE(b.n_channels() == 5);
    // B^T annihilates (1, -2, 0, ...): the range misses that direction.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v[0] = 1.0;
    v[1] = -2.0;
    CHECK((b.m.transpose() * v).norm() == 0.0);

    // B B^T is the 2x2 rank-one block [[4,2],[2,1]] plus identity on the rest.
    const Eigen::MatrixXd bbt = b.m * b.m.transpose();
    CHECK(bbt(0, 0) == 4.0);
    CHECK(bbt(0, 1) == 2.0);
    CHECK(bbt(1, 1) == 1.0);
    for (int i = 2; i < 6; ++i) CHECK(bbt(i, i) == 1.0);

    CHECK_THROWS_AS(ControlOperator::coupled(1), std::invalid_argument);
}

TEST_CASE("the initial Gramian of the coupled operator is rank deficient") {
    const Setup s(6, 0.5, 1.0, 64);
    const ControlOperator b = ControlOperator::coupled(6);
    const Gramian init = build_initial_gramian(b, s.order, s.table, 1.0);

    // diag(S) B B^T diag(S) inherits the kernel of B B^T pulled back through
    // the diagonal: k = (1/S_1, -2/S_2, 0, ...).
    Eigen::VectorXd k = Eigen::VectorXd::Zero(6);
    k[0] = 1.0 / s.table.S(0, s.grid.n_steps);
    k[1] = -2.0 / s.table.S(1, s.grid.n_steps);
    const double scale = init.m.cwiseAbs().maxCoeff() * k.norm();
    CHECK((init.m * k).norm() <= 1e-14 * scale);

    // The first 2x2 block is rank one: its determinant cancels exactly.
    const double det = init.m(0, 0) * init.m(1, 1) - init.m(0, 1) * init.m(0, 1);
    CHECK(std::abs(det) <= 1e-14 * init.m(0, 0) * init.m(1, 1));
}

TEST_CASE("resolvent solves keep round-off residuals down the lambda ladder") {
    const Setup s(8, 0.5, 1.0, 128);
    const ControlOperator b = ControlOperator::coupled(8);
    const Gramian g = build_running_gramian(b, s.order, s.table, s.weights);
    std::mt19937 rng(5150u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::VectorXd rhs(8);
    for (int i = 0; i < 8; ++i) rhs[i] = unif(rng);

    for (double lambda : {1.0, 1e-2, 1e-4, 1e-6}) {
        ResolventDiagnostics diag;
        const Eigen::VectorXd x = resolvent_apply(lambda, g, rhs, &diag);
        CHECK(diag.residual_norm <= 1e-10);
        // Recompute the residual independently of the reported one.
        Eigen::MatrixXd m = g.m;
        m.diagonal().array() += lambda;
        CHECK((m * x - rhs).norm() <= 1e-10 * rhs.norm());
        CHECK(diag.condition_estimate >= 1.0);
    }
}

TEST_CASE("resolvent decay separates controllable from blocked directions") {
    const std::vector<double> ladder = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const Setup s(4, 0.5, 1.0, 128);

    // Identity input: every direction is reachable, lambda ||R|| must die.
    {
        const ControlOperator b = ControlOperator::identity(4);
        const Gramian g = build_running_gramian(b, s.order, s.table, s.weights);
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
        e1[0] = 1.0;
        const DecayProbe probe = resolvent_decay(g.m, e1, ladder);
        REQUIRE(probe.values.size() == ladder.size());
        CHECK(probe.decaying);
        CHECK(probe.values.back() <= 0.1 * probe.values.front());
    }
    // Zero input: G = 0, so lambda ||R x|| = ||x|| for every lambda.
    {
        const ControlOperator b = ControlOperator::zero(4);
        const Gramian g = build_running_gramian(b, s.order, s.table, s.weights);
        Eigen::VectorXd x(4);
        x << 1.0, -0.5, 0.25, 2.0;
        const DecayProbe probe = resolvent_decay(g.m, x, ladder);
        CHECK_FALSE(probe.decaying);
        for (double v : probe.values)
            CHECK(v == doctest::Approx(x.norm()).epsilon(1e-12));
    }
}

TEST_CASE("Gramian JSON round trip is exact") {
    const Setup s(5, 0.7, 1.5, 16);
    const ControlOperator b = ControlOperator::coupled(5);
    const Gramian g = build_running_gramian(b, s.order, s.table, s.weights);
    const Gramian back = gramian_from_json(gramian_to_json(g));
    CHECK(back.kind == g.kind);
    CHECK(back.horizon == g.horizon);
    CHECK(back.alpha == g.alpha);
    REQUIRE(back.m.rows() == g.m.rows());
    // nlohmann serialises doubles with max_digits10, so this is bit exact.
    CHECK((back.m - g.m).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(
        gramian_from_json("{\"kind\":\"running\",\"horizon\":1,\"alpha\":0.5,"
                          "\"n\":2,\"entries_row_major\":[1,2,3]}"),
        std::invalid_argument);
}

TEST_CASE("resolvent argument validation") {
    const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(3);
    CHECK_THROWS_AS(resolvent_apply(0.0, g, rhs), std::invalid_argument);
    CHECK_THROWS_AS(resolvent_apply(-1.0, g, rhs), std::invalid_argument);
    CHECK_THROWS_AS(resolvent_apply(1.0, g, Eigen::VectorXd::Ones(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolvent_decay(g, rhs, {}), std::invalid_argument);
}
