#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace stir {

// log of the Poisson pmf e^{-lambda} lambda^k / k!
double log_poisson_pmf(double lambda, long k);
double poisson_pmf(double lambda, long k);

// Regularized lower incomplete gamma P(a,x) (series / continued fraction).
double gamma_p(double a, double x);

double normal_cdf(double x);

// Chi-square distribution with k degrees of freedom.
double chi_square_cdf(double x, int k);
double chi_square_quantile(double p, int k);

// Kolmogorov limiting tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

// Two-sided KS p-value of a sample against a continuous CDF.
// Sample is sorted in place.
double ks_test_pvalue(std::vector<double>& sample, const std::function<double(double)>& cdf);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit least_squares_fit(const std::vector<double>& x, const std::vector<double>& y);

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       const GaussRule& rule);

// Adaptive Gauss-Kronrod 7-15 with bisection.  Throws std::runtime_error on
// failure to reach the tolerance within the subdivision budget.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol = 1e-12);

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    std::size_t n = 0;
};
SummaryStats summarize(const std::vector<double>& xs);

}  // namespace stir
