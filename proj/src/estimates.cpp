#include "stir/estimates.hpp"

#include <cmath>
#include <stdexcept>

#include "stir/kernels.hpp"
#include "stir/numerics.hpp"

namespace stir {

namespace {

// c_n such that a_n(t) = c_n t^{n/2}
double simplex_coefficient(int n) {
    static const GaussRule rule = gauss_legendre(64);
    double c = 1.0;
    for (int m = 1; m <= n; ++m) {
        double jm = integrate_gauss(
            [m](double th) { return 2.0 * std::pow(std::sin(th), m); }, 0.0, 0.5 * M_PI, rule);
        c *= jm;
    }
    return c;
}

}  // namespace

double iterated_kernel_an(int n, double t) {
    if (n < 0 || n > 30) throw std::invalid_argument("iterated_kernel_an: 0 <= n <= 30 required");
    if (t < 0.0) throw std::invalid_argument("iterated_kernel_an: t >= 0 required");
    if (n == 0) return 1.0;
    return simplex_coefficient(n) * std::pow(t, 0.5 * n);
}

double an_closed_form(int n, double t) {
    if (n < 0) throw std::invalid_argument("an_closed_form: n >= 0 required");
    if (t < 0.0) throw std::invalid_argument("an_closed_form: t >= 0 required");
    if (n == 0) return 1.0;
    return std::exp(0.5 * n * std::log(M_PI * t) - std::lgamma(0.5 * n + 1.0));
}

double an_upper_bound(int n, double t) {
    if (n < 1) throw std::invalid_argument("an_upper_bound: n >= 1 required");
    return std::exp(0.5 * n * (std::log(M_PI * t) - std::log(0.5 * n) + 1.0));
}

SeriesBoundReport an_series_bound(double t, int n_max) {
    if (n_max < 3 || n_max > 30)
        throw std::invalid_argument("an_series_bound: 3 <= n_max <= 30 required");
    SeriesBoundReport rep;
    std::vector<double> a(n_max + 1);
    a[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        a[n] = iterated_kernel_an(n, t);
        rep.sum += a[n];
    }
    rep.growth_constant = rep.sum / std::exp(M_PI * t);
    for (int n = 1; n + 2 <= n_max; ++n) {
        double expected = M_PI * t / (0.5 * n + 1.0);
        rep.max_ratio_defect =
            std::max(rep.max_ratio_defect, std::fabs(a[n + 2] / a[n] - expected) / expected);
    }
    return rep;
}

double smoothed_norm(const LatticeParams& params, const std::vector<double>& f, double b) {
    if (static_cast<int>(f.size()) != params.n_sites())
        throw std::invalid_argument("smoothed_norm: profile size must be 2N+1");
    if (b <= 0.0 || b >= 1.0) throw std::invalid_argument("smoothed_norm: b in (0,1) required");
    const double t_smooth = std::pow(params.epsilon(), 1.0 + b);
    double sup = 0.0;
    for (int x = -params.N; x <= params.N; ++x) {
        auto row = reflected_walk_row(params, t_smooth, x);
        double dot = 0.0;
        for (int i = 0; i < params.n_sites(); ++i) dot += row[i] * f[i];
        sup = std::max(sup, std::fabs(dot));
    }
    return sup;
}

}  // namespace stir
