#include "stir/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stir {

double log_poisson_pmf(double lambda, long k) {
    if (lambda < 0 || k < 0) throw std::invalid_argument("log_poisson_pmf: bad arguments");
    if (lambda == 0.0) return k == 0 ? 0.0 : -HUGE_VAL;
    return -lambda + static_cast<double>(k) * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0);
}

double poisson_pmf(double lambda, long k) { return std::exp(log_poisson_pmf(lambda, k)); }

// Series and continued-fraction evaluation of P(a,x), after the classic
// gser/gcf pair.  Good to ~1e-14 relative for the argument ranges we use.
static double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("gamma_p: series did not converge");
}

static double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw std::runtime_error("gamma_p: continued fraction did not converge");
}

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chi_square_cdf(double x, int k) {
    if (k <= 0) throw std::invalid_argument("chi_square_cdf: k must be positive");
    if (x <= 0) return 0.0;
    return gamma_p(0.5 * k, 0.5 * x);
}

double chi_square_quantile(double p, int k) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("chi_square_quantile: p in (0,1) required");
    double lo = 0.0;
    double hi = 1.0;
    while (chi_square_cdf(hi, k) < p) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("chi_square_quantile: bracket failed");
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, k) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    // the alternating series needs O(1/lambda) terms when lambda is small,
    // so switch to the theta-transformed complement there
    if (lambda < 0.75) {
        double cdf = 0.0;
        for (int j = 1; j <= 20; ++j) {
            double a = (2.0 * j - 1.0) * 3.141592653589793;
            double term = std::exp(-a * a / (8.0 * lambda * lambda));
            cdf += term;
            if (term < 1e-18) break;
        }
        cdf *= std::sqrt(2.0 * 3.141592653589793) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_test_pvalue(std::vector<double>& sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_test_pvalue: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, (i + 1) / n - f);
        d = std::max(d, f - i / n);
    }
    double sn = std::sqrt(n);
    return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

LinearFit least_squares_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares_fit: need matching samples, n >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("least_squares_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n, starting from the Chebyshev-like estimate.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       const GaussRule& rule) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace {

// Gauss-Kronrod 7-15 constants (QUADPACK dqk15).
constexpr double kXgk[8] = {0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
                            0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
                            0.2077849550078985, 0.0};
constexpr double kWgk[8] = {0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
                            0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
                            0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                           0.4179591836734694};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double fc = f(mid);
    double kr = kWgk[7] * fc;
    double gs = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = half * kXgk[i];
        double fsum = f(mid - dx) + f(mid + dx);
        kr += kWgk[i] * fsum;
        if (i % 2 == 1) gs += kWg[i / 2] * fsum;
    }
    kr *= half;
    gs *= half;
    return {kr, std::fabs(kr - gs)};
}

void integrate_rec(const std::function<double(double)>& f, double a, double b, double abs_tol,
                   double rel_tol, int depth, double& acc) {
    PanelResult r = gk15(f, a, b);
    if (r.error <= std::max(abs_tol, rel_tol * std::fabs(r.value)) || (b - a) < 1e-14) {
        acc += r.value;
        return;
    }
    if (depth > 48) throw std::runtime_error("integrate_adaptive: subdivision budget exhausted");
    double mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1, acc);
    integrate_rec(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1, acc);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol) {
    if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: need a <= b");
    if (a == b) return 0.0;
    double acc = 0.0;
    integrate_rec(f, a, b, abs_tol, rel_tol, 0, acc);
    return acc;
}

SummaryStats summarize(const std::vector<double>& xs) {
    SummaryStats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double v : xs) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double v : xs) ss += (v - s.mean) * (v - s.mean);
    s.variance = s.n > 1 ? ss / static_cast<double>(s.n - 1) : 0.0;
    return s;
}

}  // namespace stir
