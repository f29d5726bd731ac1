#include "fracreach/spectral.hpp"

#include <cmath>

namespace fracreach {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kBasisScale = std::sqrt(2.0 / kPi);
}  // namespace

SpectralState project(const std::function<double(double)>& f,
                      const SpectralOperator& op, int panels_per_mode) {
    if (panels_per_mode < 8)
        throw std::invalid_argument("project: need at least 8 panels per mode");
    const int panels = panels_per_mode * op.n_modes;
    const double h = kPi / panels;
    SpectralState c = SpectralState::Zero(op.n_modes);
    // Composite Simpson; endpoints contribute nothing since sin vanishes there.
    for (int i = 1; i < panels; ++i) {
        const double x = h * i;
        const double wgt = (i % 2 == 1) ? 4.0 : 2.0;
        const double fx = f(x) * wgt;
        for (int n = 1; n <= op.n_modes; ++n)
            c[n - 1] += fx * std::sin(n * x);
    }
    c *= kBasisScale * h / 3.0;
    return c;
}

double reconstruct(const SpectralState& c, double x) {
    double v = 0.0;
    for (int n = 1; n <= c.size(); ++n) v += c[n - 1] * std::sin(n * x);
    return kBasisScale * v;
}

SpectralState frac_power_apply(const SpectralState& c, double q) {
    SpectralState out(c.size());
    for (int n = 1; n <= c.size(); ++n)
        out[n - 1] = std::pow(static_cast<double>(n) * n, q) * c[n - 1];
    return out;
}

double norm_q(const SpectralState& c, double q) {
    if (q == 0.0) return c.norm();
    double s = 0.0;
    for (int n = 1; n <= c.size(); ++n) {
        const double w = std::pow(static_cast<double>(n) * n, q) * c[n - 1];
        s += w * w;
    }
    return std::sqrt(s);
}

double tail_fraction(const SpectralState& c) {
    const double total = c.norm();
    if (total == 0.0) return 0.0;
    const int start = static_cast<int>(c.size() - c.size() / 4);
    double tail = 0.0;
    for (int i = start; i < c.size(); ++i) tail += c[i] * c[i];
    return std::sqrt(tail) / total;
}

}  // namespace fracreach
