#include "fracreach/quadrature.hpp"

#include <cmath>

namespace fracreach {

namespace {

// m^p - (m-1)^p without cancellation for large m.
double power_diff(double p, int m) {
    if (m == 1) return 1.0;
    const double base = m - 1.0;
    return std::pow(base, p) * std::expm1(p * std::log1p(1.0 / base));
}

}  // namespace

ConvolutionWeights build_weights(const FractionalOrder& order,
                                 const TimeGrid& grid) {
    const double a = order.alpha;
    const double ha = std::pow(grid.h(), a);
    const int ns = grid.n_steps;

    // Panel [t_{k-m}, t_{k-m+1}] against the kernel (t_k - s)^{alpha-1}
    // contributes A(m) to the left node and B(m) to the right node, where
    //   A(m) = (m^{a+1}-(m-1)^{a+1})/(a+1) - (m-1)(m^a-(m-1)^a)/a,
    //   B(m) = m (m^a-(m-1)^a)/a - (m^{a+1}-(m-1)^{a+1})/(a+1).
    // A + B telescopes, which is what pins every row sum to t_k^a / a.
    std::vector<double> A(ns + 1), B(ns + 1);
    for (int m = 1; m <= ns; ++m) {
        const double da = power_diff(a, m);
        const double da1 = power_diff(a + 1.0, m);
        A[m] = ha * (da1 / (a + 1.0) - (m - 1.0) * da / a);
        B[m] = ha * (m * da / a - da1 / (a + 1.0));
    }

    ConvolutionWeights w{a, grid, {}};
    w.rows.resize(ns + 1);
    for (int k = 0; k <= ns; ++k) {
        w.rows[k].assign(k + 1, 0.0);
        for (int p = 0; p < k; ++p) {
            const int m = k - p;
            w.rows[k][p] += A[m];
            w.rows[k][p + 1] += B[m];
        }
    }
    return w;
}

double convolve(const ConvolutionWeights& w, const std::vector<double>& samples,
                int k) {
    if (k < 0 || k >= static_cast<int>(w.rows.size()))
        throw std::out_of_range("convolve: node index outside the weight table");
    if (samples.size() < w.rows[k].size())
        throw std::invalid_argument("convolve: too few samples for this node");
    double s = 0.0;
    for (std::size_t j = 0; j < w.rows[k].size(); ++j)
        s += w.rows[k][j] * samples[j];
    return s;
}

Eigen::VectorXd convolve(const ConvolutionWeights& w,
                         const std::vector<Eigen::VectorXd>& samples, int k) {
    if (k < 0 || k >= static_cast<int>(w.rows.size()))
        throw std::out_of_range("convolve: node index outside the weight table");
    if (samples.size() < w.rows[k].size())
        throw std::invalid_argument("convolve: too few samples for this node");
    Eigen::VectorXd s = Eigen::VectorXd::Zero(samples[0].size());
    for (std::size_t j = 0; j < w.rows[k].size(); ++j)
        s += w.rows[k][j] * samples[j];
    return s;
}

}  // namespace fracreach
