#include "fracreach/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace fracreach {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest |z|^{1/alpha} served by the alternating Taylor series in double.
// The summation loses roughly e^{|z|^{1/alpha}} * eps to cancellation, so
// 11.5 keeps the absolute error near 1e-11.
constexpr double kSeriesRadius = 11.5;

// From here outward the ten-term algebraic tail is accurate to ~1e-18.
constexpr double kAsymptoticEdge = 100.0;

struct SignedLog {
    double log_abs;
    double sign;  // -1, 0, +1; sign == 0 means the value is exactly zero
};

// log |1/Gamma(y)| with sign, valid for any real y; poles give sign 0.
SignedLog reciprocal_gamma_log(double y) {
    if (y >= 0.5) return {-boost::math::lgamma(y), 1.0};
    const double s = boost::math::sin_pi(y);
    if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    // Reflection: 1/Gamma(y) = sin(pi y) Gamma(1-y) / pi.
    return {std::log(std::abs(s)) + boost::math::lgamma(1.0 - y) - std::log(kPi),
            s > 0.0 ? 1.0 : -1.0};
}

// Compensated (Neumaier) accumulator: the running error term rescues the
// low-order bits that a plain sum of O(1e5) magnitude-e^{11.5} terms sheds.
struct CompensatedSum {
    double s = 0.0;
    double c = 0.0;
    void add(double t) {
        const double u = s + t;
        if (std::abs(s) >= std::abs(t))
            c += (s - u) + t;
        else
            c += (t - u) + s;
        s = u;
    }
    double value() const { return s + c; }
};

double ml_series(double alpha, double beta, double z, int* terms_out) {
    // sum_k z^k / Gamma(alpha k + beta), terms evaluated in log form so that
    // intermediate powers cannot overflow even when |z|^k would.
    const double la = std::log(std::abs(z));
    const double sign = z < 0.0 ? -1.0 : 1.0;
    CompensatedSum acc;
    acc.add(reciprocal_gamma(beta));
    const double w = std::pow(std::abs(z), 1.0 / alpha);
    const int cap = 300 + static_cast<int>((w + 80.0) / alpha);
    int quiet = 0;
    int k = 1;
    double sgn = 1.0;
    for (; k <= cap; ++k) {
        sgn *= sign;
        const double lt = k * la - boost::math::lgamma(alpha * k + beta);
        const double t = sgn * std::exp(lt);
        acc.add(t);
        if (std::abs(t) <= 1e-18 * (1.0 + std::abs(acc.value())))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 2) break;
    }
    if (terms_out) *terms_out = k;
    if (quiet < 2)
        throw std::runtime_error(
            "mittag_leffler: series failed to converge within the term cap");
    return acc.value();
}

// Real integral representation on the cut, valid for 0 < alpha < 1,
// beta <= 1, z < 0:
//   E = int_0^inf  (1/(alpha pi)) r^{(1-beta)/alpha} e^{-r^{1/alpha}}
//       [r sin(pi(1-beta)) - z sin(pi(1-beta+alpha))]
//       / (r^2 - 2 r z cos(alpha pi) + z^2)  dr.
// For beta <= 1 the integrand has no endpoint singularity, which is why the
// dispatcher reduces beta below 1 before coming here.
double ml_cut_integral(double alpha, double beta, double z, int* evals_out) {
    const double s1 = boost::math::sin_pi(1.0 - beta);
    const double s2 = boost::math::sin_pi(1.0 - beta + alpha);
    const double c = std::cos(kPi * alpha);
    const double p = (1.0 - beta) / alpha;
    long evals = 0;
    auto kernel = [&](double r) {
        ++evals;
        if (r <= 0.0) return 0.0;
        const double den = (r - z * c) * (r - z * c) + z * z * (1.0 - c * c);
        const double num = r * s1 - z * s2;
        return std::pow(r, p) * std::exp(-std::pow(r, 1.0 / alpha)) * num / den;
    };
    const double r_cut = std::pow(50.0, alpha);
    std::vector<double> pts = {0.0, r_cut};
    if (c > 0.0) {
        // Lorentzian dip of the denominator sits inside the range only for
        // alpha < 1/2; split there so adaptive refinement finds it.  Right at
        // alpha = 1/2 the rounded cosine is ~6e-17, which would plant
        // degenerate breakpoints near r = 0 and stall the adaptive rule, so
        // only split when the dip lies meaningfully inside the range.
        const double r_star = -z * c;
        if (r_star >= 0.01 * r_cut) {
            for (double m : {0.5, 1.0, 2.0})
                if (m * r_star < r_cut) pts.push_back(m * r_star);
        }
    }
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            kernel, pts[i], pts[i + 1], 14, 1e-13);
    }
    if (evals_out) *evals_out = static_cast<int>(evals);
    return total / (alpha * kPi);
}

double ml_asymptotic(double alpha, double beta, double z, int terms = 10) {
    // E ~ -sum_{k=1}^{K} z^{-k} / Gamma(beta - alpha k); reciprocal_gamma
    // returns 0 at the poles, so vanishing terms need no special casing.
    double s = 0.0;
    double p = 1.0;
    for (int k = 1; k <= terms; ++k) {
        p /= z;
        s -= p * reciprocal_gamma(beta - alpha * k);
    }
    return s;
}

// alpha = 1, integer beta = m: E_{1,m}(z) = z^{1-m} (e^z - sum_{k<m-1} z^k/k!).
// Only safe where the partial sum does not cancel against e^z, i.e. z >= 0
// or small |z| (the dispatcher routes those through the series anyway).
double ml_exp_identity(double beta_int, double z) {
    const int m = static_cast<int>(beta_int);
    if (m == 1) return std::exp(z);
    double partial = 0.0, term = 1.0;
    for (int k = 0; k <= m - 2; ++k) {
        partial += term;
        term *= z / (k + 1);
    }
    return std::pow(z, 1 - m) * (std::exp(z) - partial);
}

struct WrightRegimes {
    double b_const;       // B(alpha) = (1-alpha) alpha^{alpha/(1-alpha)}
    double series_edge;   // theta where the decay exponent E reaches 8
    double contour_edge;  // theta where E reaches 25
};

WrightRegimes wright_regimes(double a) {
    const double b = (1.0 - a) * std::pow(a, a / (1.0 - a));
    const double e1 = std::pow(8.0 / b, 1.0 - a);
    const double e2 = std::pow(25.0 / b, 1.0 - a);
    return {b, e1, e2};
}

double wright_series(double a, double theta) {
    // sum_n (-theta)^n / (n! Gamma(1 - a - a n)) in log form.  Odd terms can
    // vanish exactly (alpha = 1/2 wipes every second Gamma), so the stop rule
    // demands two consecutive negligible terms.
    const double lt = std::log(theta);
    CompensatedSum acc;
    int quiet = 0;
    double sgn = 1.0;
    acc.add(reciprocal_gamma(1.0 - a));
    for (int n = 1; n <= 60000; ++n) {
        sgn = -sgn;
        const SignedLog rg = reciprocal_gamma_log(1.0 - a - a * n);
        double t = 0.0;
        if (rg.sign != 0.0)
            t = sgn * rg.sign *
                std::exp(n * lt - boost::math::lgamma(n + 1.0) + rg.log_abs);
        acc.add(t);
        if (std::abs(t) <= 1e-18 * (1.0 + std::abs(acc.value())))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 2) return acc.value();
    }
    throw std::runtime_error("wright_density: series failed to converge");
}

double wright_contour(double a, double theta) {
    // Rotated-ray integral.  With sigma = r e^{i phi} and y = r^alpha the
    // r^{alpha-1} endpoint singularity cancels exactly:
    //   M = (1/(alpha pi)) Im  e^{i alpha phi}
    //       int_0^inf exp(y^{1/alpha} e^{i phi} - theta y e^{i alpha phi}) dy.
    const double phi = (a <= 0.5) ? kPi : 0.5 * (kPi / 2.0 + kPi / (2.0 * a));
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double caphi = std::cos(a * phi), saphi = std::sin(a * phi);
    double y_cut = std::numeric_limits<double>::infinity();
    if (caphi > 1e-12) y_cut = std::min(y_cut, 45.0 / (theta * caphi));
    if (cphi < -1e-12) y_cut = std::min(y_cut, std::pow(45.0 / -cphi, a));
    auto kernel = [&](double y) {
        if (y <= 0.0) return saphi;  // limit of sin(a phi + 0) * e^0
        const double yp = std::pow(y, 1.0 / a);
        const double re = yp * cphi - theta * y * caphi;
        const double im = yp * sphi - theta * y * saphi;
        return std::exp(re) * std::sin(a * phi + im);
    };
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        kernel, 0.0, y_cut, 15, 1e-12);
    return v / (a * kPi);
}

double wright_saddle(double a, double theta) {
    // Leading-order saddle-point tail; exact at alpha = 1/2 where it reduces
    // to exp(-theta^2/4)/sqrt(pi).  Assembled in log form: the power-law
    // prefactor and the stretched exponential individually overflow double
    // long before their product leaves the normal range.
    const double one_m = 1.0 - a;
    const double b = one_m * std::pow(a, a / one_m);
    const double log_v = -0.5 * std::log(2.0 * kPi * one_m) +
                         (2.0 * a - 1.0) / (2.0 * one_m) * std::log(a) +
                         (a - 0.5) / one_m * std::log(theta) -
                         b * std::pow(theta, 1.0 / one_m);
    return std::exp(log_v);  // underflows cleanly to 0 deep in the tail
}

double wright_eval(double a, double theta) {
    if (theta == 0.0) return reciprocal_gamma(1.0 - a);
    const WrightRegimes r = wright_regimes(a);
    if (theta <= r.series_edge) return wright_series(a, theta);
    if (theta <= r.contour_edge) return wright_contour(a, theta);
    return wright_saddle(a, theta);
}

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw std::domain_error("gamma_fn: nan argument");
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    if (x > 171.624)
        throw std::overflow_error("gamma_fn: result exceeds double range");
    if (x < 0.5) {
        // Reflection keeps the Lanczos core on x >= 1/2 where it is accurate.
        const double s = boost::math::sin_pi(x);
        return kPi / (s * gamma_fn(1.0 - x));
    }
    // Lanczos, g = 7, 9 coefficients, evaluated in log form so that the
    // t^{x+1/2} factor cannot overflow before Gamma itself does.
    static const double kCoef[9] = {
        0.99999999999980993,      676.5203681218851,    -1259.1392167224028,
        771.32342877765313,       -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
    const double xm = x - 1.0;
    double a = kCoef[0];
    for (int i = 1; i < 9; ++i) a += kCoef[i] / (xm + i);
    const double t = xm + 7.5;
    const double log_g = 0.5 * std::log(2.0 * kPi) + (xm + 0.5) * std::log(t) -
                         t + std::log(a);
    return std::exp(log_g);
}

double log_gamma_pos(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma_pos: requires x > 0");
    return boost::math::lgamma(x);
}

double reciprocal_gamma(double x) {
    if (x >= 0.5) return std::exp(-boost::math::lgamma(x));
    const SignedLog sl = reciprocal_gamma_log(x);
    if (sl.sign == 0.0) return 0.0;
    const double v = std::exp(sl.log_abs);
    if (std::isinf(v))
        throw std::overflow_error("reciprocal_gamma: magnitude exceeds double range");
    return sl.sign * v;
}

double mittag_leffler(double alpha, double beta, double z, MLDiagnostics* diag) {
    if (std::isnan(alpha) || std::isnan(beta) || std::isnan(z))
        throw std::domain_error("mittag_leffler: nan argument");
    if (!(alpha > 0.0) || alpha > 2.0)
        throw std::domain_error("mittag_leffler: alpha must lie in (0, 2]");
    if (!(beta > 0.0))
        throw std::domain_error("mittag_leffler: beta must be positive");

    MLDiagnostics local;
    MLDiagnostics& d = diag ? *diag : local;

    if (z == 0.0) {
        d = {MLStrategy::series, 1};
        return reciprocal_gamma(beta);
    }

    const double w = std::pow(std::abs(z), 1.0 / alpha);

    if (z > 0.0) {
        // Positive axis: all series terms are positive, so the only failure
        // modes are overflow of the value itself and the term cap.
        if (w <= 700.0) {
            d.strategy = MLStrategy::series;
            return ml_series(alpha, beta, z, &d.terms);
        }
        if (alpha == 1.0 && beta == std::floor(beta) && beta < 171.0) {
            d = {MLStrategy::exp_identity, 0};
            const double v = ml_exp_identity(beta, z);
            if (std::isinf(v))
                throw std::overflow_error("mittag_leffler: result exceeds double range");
            return v;
        }
        throw std::overflow_error("mittag_leffler: result exceeds double range");
    }

    // Negative axis.
    if (w <= kSeriesRadius) {
        d.strategy = MLStrategy::series;
        return ml_series(alpha, beta, z, &d.terms);
    }
    if (alpha == 1.0 && beta == 1.0) {
        d = {MLStrategy::exp_identity, 0};
        return std::exp(z);  // exact: E_{1,1} is the exponential
    }
    if (std::abs(z) >= kAsymptoticEdge) {
        if (alpha > 1.0) {
            // The exponential modes on the Stokes rays decay like
            // exp(w cos(pi/alpha)); demand 1e-17-level suppression before
            // trusting the purely algebraic tail.
            if (w * std::abs(std::cos(kPi / alpha)) < 40.0)
                throw std::runtime_error(
                    "mittag_leffler: oscillatory part not negligible here; "
                    "no convergent strategy for this (alpha, z)");
        }
        d = {MLStrategy::asymptotic, 10};
        return ml_asymptotic(alpha, beta, z);
    }
    if (alpha < 1.0) {
        // Reduce beta below 1 so the cut integral is singularity-free:
        // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z, unwound after.
        std::vector<double> betas;
        double b = beta;
        while (b > 1.0) {
            betas.push_back(b);
            b -= alpha;
        }
        d.strategy = MLStrategy::integral;
        double v = ml_cut_integral(alpha, b, z, &d.terms);
        for (auto it = betas.rbegin(); it != betas.rend(); ++it)
            v = (v - reciprocal_gamma(*it - alpha)) / z;
        return v;
    }
    throw std::runtime_error(
        "mittag_leffler: no convergent strategy implemented for alpha >= 1 with "
        "z in (-100, -11.5^alpha) unless beta = 1");
}

double wright_density(const FractionalOrder& order, double theta,
                      double tail_cutoff) {
    if (order.alpha >= 1.0)
        throw std::domain_error(
            "wright_density: alpha = 1 degenerates to a point mass");
    if (std::isnan(theta) || theta < 0.0)
        throw std::invalid_argument("wright_density: theta must be >= 0");
    (void)tail_cutoff;  // beyond the cutoff the saddle tail is already in use
    return wright_eval(order.alpha, theta);
}

namespace {

// Shared segmented quadrature against the density: splitting at the regime
// edges keeps each piece smooth for Gauss-Kronrod.
double density_integral(const FractionalOrder& order,
                        const std::function<double(double)>& weight,
                        double tail_cutoff) {
    const double a = order.alpha;
    const WrightRegimes r = wright_regimes(a);
    std::vector<double> pts = {0.0};
    if (r.series_edge < tail_cutoff) pts.push_back(r.series_edge);
    if (r.contour_edge < tail_cutoff) pts.push_back(r.contour_edge);
    pts.push_back(tail_cutoff);
    auto f = [&](double th) { return wright_eval(a, th) * weight(th); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, pts[i], pts[i + 1], 15, 1e-10);
    }
    return total;
}

}  // namespace

double density_laplace(const FractionalOrder& order, double z,
                       double tail_cutoff) {
    if (order.alpha >= 1.0)
        throw std::domain_error("density_laplace: requires alpha < 1");
    if (std::isnan(z) || z < 0.0)
        throw std::invalid_argument("density_laplace: requires z >= 0");
    return density_integral(order, [z](double th) { return std::exp(-z * th); },
                            tail_cutoff);
}

double density_moment(const FractionalOrder& order, int k, double tail_cutoff) {
    if (order.alpha >= 1.0)
        throw std::domain_error("density_moment: requires alpha < 1");
    if (k < 0) throw std::invalid_argument("density_moment: requires k >= 0");
    return density_integral(order,
                            [k](double th) { return std::pow(th, k); },
                            tail_cutoff);
}

}  // namespace fracreach
