#include "stir/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "stir/numerics.hpp"

namespace stir {

double gaussian_kernel(double t, double r) {
    if (t <= 0.0) throw std::invalid_argument("gaussian_kernel: t > 0 required");
    return std::exp(-r * r / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
}

double free_walk_pmf(double lambda, long dx) {
    if (lambda < 0.0) throw std::invalid_argument("free_walk_pmf: lambda >= 0 required");
    const long d = std::labs(dx);
    if (lambda == 0.0) return d == 0 ? 1.0 : 0.0;

    // Terms T(m) = pois(m; lambda) * C(m, (m+d)/2) / 2^m over m >= d with
    // m = d (mod 2).  The sequence is log-concave in m, so we anchor at a
    // point near the mode and sweep outward until terms are negligible.
    long m0 = std::max(d, std::lround(lambda));
    if (((m0 ^ d) & 1L) != 0) ++m0;

    auto log_term = [&](long m) {
        return log_poisson_pmf(lambda, m) + std::lgamma(m + 1.0) -
               std::lgamma((m + d) / 2 + 1.0) - std::lgamma((m - d) / 2 + 1.0) -
               m * M_LN2;
    };
    const double log_anchor = log_term(m0);
    if (log_anchor == -HUGE_VAL) return 0.0;

    // ratio T(m+2)/T(m), from the Poisson and binomial recurrences
    auto up_ratio = [&](long m) {
        return lambda * lambda /
               (4.0 * ((m + d) / 2 + 1.0) * ((m - d) / 2 + 1.0));
    };

    const double cutoff = 1e-18;
    double sum = 1.0;  // relative to the anchor term
    double peak = 1.0;

    double term = 1.0;
    for (long m = m0;; m += 2) {
        double next = term * up_ratio(m);
        if (!(next > 0.0) || (next < cutoff * peak && next < term)) break;
        term = next;
        peak = std::max(peak, term);
        sum += term;
        if (m > m0 + 400000000L) throw std::runtime_error("free_walk_pmf: no convergence");
    }
    term = 1.0;
    for (long m = m0; m - 2 >= d; m -= 2) {
        double next = term / up_ratio(m - 2);
        if (!(next > 0.0) || (next < cutoff * peak && next < term)) break;
        term = next;
        peak = std::max(peak, term);
        sum += term;
    }
    return std::exp(log_anchor) * sum;
}

double free_walk_tail_bound(double lambda, double d) {
    if (d <= 0.0) return 1.0;
    if (lambda <= 0.0) return 0.0;
    // optimal exponential tilt: theta = asinh(d / lambda)
    const double theta = std::asinh(d / lambda);
    const double log_bound = lambda * (std::cosh(theta) - 1.0) - theta * d;
    return 2.0 * std::exp(log_bound);
}

namespace {

// Offsets of all unfolded images of z as seen from x, out to displacement D.
void collect_image_offsets(const LatticeParams& params, int x, int z, double D,
                           std::vector<long>& out) {
    const long L = params.period();
    const long bases[2] = {static_cast<long>(z) - x,
                           static_cast<long>(2 * params.N + 1 - z) - x};
    for (long base : bases) {
        long m_lo = static_cast<long>(std::floor((-D - base) / static_cast<double>(L)));
        long m_hi = static_cast<long>(std::ceil((D - base) / static_cast<double>(L)));
        for (long m = m_lo; m <= m_hi; ++m) {
            long off = base + m * L;
            if (std::fabs(static_cast<double>(off)) <= D) out.push_back(off);
        }
    }
}

double image_cutoff(double lambda) {
    // smallest D with certified tail below 1e-14
    double D = std::max(8.0, 8.0 * std::sqrt(lambda));
    while (free_walk_tail_bound(lambda, D) > 1e-14) D *= 1.25;
    return D;
}

}  // namespace

double reflected_walk_kernel(const LatticeParams& params, double t, int x, int z) {
    if (!params.contains(x) || !params.contains(z))
        throw std::invalid_argument("reflected_walk_kernel: sites must lie in [-N, N]");
    if (t < 0.0) throw std::invalid_argument("reflected_walk_kernel: t >= 0 required");
    const double lambda = t / (params.epsilon() * params.epsilon());
    if (lambda == 0.0) return x == z ? 1.0 : 0.0;

    const double D = image_cutoff(lambda);
    std::vector<long> offsets;
    collect_image_offsets(params, x, z, D, offsets);
    double sum = 0.0;
    for (long off : offsets) sum += free_walk_pmf(lambda, off);
    return sum;
}

std::vector<double> reflected_walk_row(const LatticeParams& params, double t, int x) {
    std::vector<double> row(params.n_sites());
    for (int z = -params.N; z <= params.N; ++z)
        row[params.site_index(z)] = reflected_walk_kernel(params, t, x, z);
    return row;
}

LcltReport lclt_comparison(double lambda, double window_exponent) {
    if (lambda <= 0.0) throw std::invalid_argument("lclt_comparison: lambda > 0 required");
    LcltReport rep;
    rep.lambda = lambda;
    rep.window_radius = static_cast<long>(std::floor(std::pow(lambda, window_exponent)));

    for (long d = 0; d <= rep.window_radius; ++d) {
        double q = free_walk_pmf(lambda, d);
        double g = gaussian_kernel(lambda, static_cast<double>(d));
        rep.max_rel_err = std::max(rep.max_rel_err, std::fabs(q - g) / g);
    }
    rep.c1 = rep.max_rel_err * std::sqrt(lambda);

    rep.tail_log_constant = -HUGE_VAL;
    for (long d = rep.window_radius + 1;; ++d) {
        double q = free_walk_pmf(lambda, d);
        if (q < 1e-260) break;
        double lq = std::log(q);
        rep.tail_gauss_ratio =
            std::max(rep.tail_gauss_ratio, std::exp(lq + 0.25 * d * d / lambda));
        rep.tail_log_constant =
            std::max(rep.tail_log_constant, std::log(static_cast<double>(d)) + lq / d);
    }
    return rep;
}

namespace {

// sum of 2 G_t(offset) over one image family offset = 4k + shift, k in Z
double theta_sum(double t, double shift) {
    if (t <= 0.0) throw std::invalid_argument("theta kernel: t > 0 required");
    double sum = 0.0;
    for (int sgn = 0; sgn < 2; ++sgn) {
        // k >= 0 with the given sign branch; k=0 belongs to the + branch only
        for (long k = (sgn == 0 ? 0 : 1);; ++k) {
            double off = (sgn == 0 ? 4.0 * k : -4.0 * k) + shift;
            double term = 2.0 * gaussian_kernel(t, off);
            sum += term;
            if (std::fabs(off) > 4.0 && term < 1e-18) break;
        }
    }
    return sum;
}

}  // namespace

double theta_p(double t) { return theta_sum(t, 0.0); }

double theta_q(double t) { return theta_sum(t, 2.0); }

double theta_w(double t, Side side, const std::function<double(double)>& u0) {
    auto profile = [&](double r) { return side == Side::plus ? u0(r) : u0(-r); };
    if (t <= 0.0) return profile(1.0);

    // w_{+,t} = sum_k int_{-1}^{1} u0(r) 2 G_t(1 - r + 4k) dr; images whose
    // interval [4k, 4k+2] is far beyond the Gaussian range are dropped.
    double sum = 0.0;
    for (int sgn = 0; sgn < 2; ++sgn) {
        for (long k = (sgn == 0 ? 0 : 1);; ++k) {
            long kk = sgn == 0 ? k : -k;
            double nearest = std::max(0.0, 4.0 * std::labs(kk) - 2.0);
            if (2.0 * gaussian_kernel(t, nearest) < 1e-16 && std::labs(kk) > 1) break;
            double val = integrate_adaptive(
                [&](double r) { return profile(r) * 2.0 * gaussian_kernel(t, 1.0 - r + 4.0 * kk); },
                -1.0, 1.0, 1e-12, 1e-10);
            sum += val;
        }
    }
    return sum;
}

}  // namespace stir
