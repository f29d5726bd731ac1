#include "fracreach/gramian.hpp"

#include <json.hpp>

#include <cmath>

namespace fracreach {

ControlOperator ControlOperator::coupled(int n_modes) {
    if (n_modes < 2)
        throw std::invalid_argument("ControlOperator::coupled: need >= 2 modes");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_modes, n_modes - 1);
    m(0, 0) = 2.0;
    for (int n = 2; n <= n_modes; ++n) m(n - 1, n - 2) = 1.0;
    return {m};
}

ControlOperator ControlOperator::identity(int n_modes) {
    return {Eigen::MatrixXd::Identity(n_modes, n_modes)};
}

ControlOperator ControlOperator::zero(int n_modes) {
    return {Eigen::MatrixXd::Zero(n_modes, n_modes)};
}

namespace {

void check_table(const ControlOperator& b, const PropagatorTable& table,
                 const char* who) {
    if (table.S.rows() != b.n_modes())
        throw std::invalid_argument(std::string(who) +
                                    ": table and operator mode counts differ");
}

}  // namespace

Gramian build_running_gramian(const ControlOperator& b,
                              const FractionalOrder& order,
                              const PropagatorTable& table,
                              const ConvolutionWeights& weights) {
    check_table(b, table, "build_running_gramian");
    const int ns = weights.grid.n_steps;
    const int nm = b.n_modes();
    const Eigen::MatrixXd bbt = b.m * b.m.transpose();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nm, nm);
    for (int j = 0; j <= ns; ++j) {
        const double w = weights.rows[ns][j];
        const Eigen::VectorXd d = table.T.col(ns - j);
        g.noalias() += w * d.asDiagonal() * bbt * d.asDiagonal();
    }
    g = 0.5 * (g + g.transpose()).eval();
    return {g, weights.grid.horizon, order.alpha, "running"};
}

Gramian build_initial_gramian(const ControlOperator& b,
                              const FractionalOrder& order,
                              const PropagatorTable& table, double horizon) {
    check_table(b, table, "build_initial_gramian");
    const Eigen::VectorXd d = table.S.col(table.S.cols() - 1);
    Eigen::MatrixXd g = d.asDiagonal() * (b.m * b.m.transpose()) * d.asDiagonal();
    g = 0.5 * (g + g.transpose()).eval();
    return {g, horizon, order.alpha, "initial"};
}

Eigen::VectorXd resolvent_apply(double lambda, const Eigen::MatrixXd& gram,
                                const Eigen::VectorXd& rhs,
                                ResolventDiagnostics* diag) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("resolvent_apply: lambda must be positive");
    if (gram.rows() != gram.cols() || gram.rows() != rhs.size())
        throw std::invalid_argument("resolvent_apply: dimension mismatch");
    Eigen::MatrixXd m = gram;
    m.diagonal().array() += lambda;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    Eigen::VectorXd x = ldlt.solve(rhs);
    // One refinement step recovers the digits the factorization sheds when
    // lambda is many orders below the top Gramian eigenvalue.
    x += ldlt.solve(rhs - m * x);
    if (diag) {
        const double rn = (m * x - rhs).norm() / (rhs.norm() + 1e-300);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram,
                                                          Eigen::EigenvaluesOnly);
        const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
        const double bottom = std::max(es.eigenvalues().minCoeff(), 0.0);
        diag->residual_norm = rn;
        diag->condition_estimate = (lambda + top) / (lambda + bottom);
        diag->ill_conditioned = diag->condition_estimate > 1e12;
    }
    return x;
}

Eigen::VectorXd resolvent_apply(double lambda, const Gramian& gram,
                                const Eigen::VectorXd& rhs,
                                ResolventDiagnostics* diag) {
    return resolvent_apply(lambda, gram.m, rhs, diag);
}

DecayProbe resolvent_decay(const Eigen::MatrixXd& gram,
                           const Eigen::VectorXd& x,
                           const std::vector<double>& lambdas) {
    if (lambdas.empty())
        throw std::invalid_argument("resolvent_decay: empty lambda ladder");
    DecayProbe probe;
    probe.lambdas = lambdas;
    for (double lam : lambdas) {
        const Eigen::VectorXd r = resolvent_apply(lam, gram, x);
        probe.values.push_back(lam * r.norm());
    }
    probe.decaying = probe.values.back() <= 0.1 * probe.values.front();
    return probe;
}

std::string gramian_to_json(const Gramian& g) {
    nlohmann::json j;
    j["kind"] = g.kind;
    j["horizon"] = g.horizon;
    j["alpha"] = g.alpha;
    j["n"] = g.m.rows();
    std::vector<double> entries;
    entries.reserve(g.m.size());
    for (int r = 0; r < g.m.rows(); ++r)
        for (int c = 0; c < g.m.cols(); ++c) entries.push_back(g.m(r, c));
    j["entries_row_major"] = entries;
    return j.dump(2);
}

Gramian gramian_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Gramian g;
    g.kind = j.at("kind").get<std::string>();
    g.horizon = j.at("horizon").get<double>();
    g.alpha = j.at("alpha").get<double>();
    const int n = j.at("n").get<int>();
    const auto entries = j.at("entries_row_major").get<std::vector<double>>();
    if (static_cast<int>(entries.size()) != n * n)
        throw std::invalid_argument("gramian_from_json: entry count mismatch");
    g.m.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g.m(r, c) = entries[r * n + c];
    return g;
}

}  // namespace fracreach
