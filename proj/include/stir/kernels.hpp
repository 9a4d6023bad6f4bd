#pragma once

#include <functional>
#include <vector>

#include "stir/lattice.hpp"

namespace stir {

// Heat kernel with variance t (the macroscopic equation is u_t = u_rr / 2).
double gaussian_kernel(double t, double r);

// Displacement pmf of the continuous-time symmetric nearest-neighbour walk
// after total jump intensity lambda (rate 1/2 per direction, so a walk run
// at exchange rate eps^-2/2 per direction for time t has lambda = eps^-2 t).
// Poisson mixture of symmetric Bernoulli steps, summed by outward recurrence
// from the modal jump count.
double free_walk_pmf(double lambda, long dx);

// Chernoff bound on P[|displacement| >= d]; used to certify image-sum
// truncation in the reflected kernel.
double free_walk_tail_bound(double lambda, double d);

// Transition probability x -> z of the wall-reflected walk on [-N, N] after
// macroscopic time t, via the unfolded image families z + mL and
// (2N+1 - z) + mL with L = 2(2N+1).
double reflected_walk_kernel(const LatticeParams& params, double t, int x, int z);
std::vector<double> reflected_walk_row(const LatticeParams& params, double t, int x);

// Local-CLT comparison of the free pmf against the Gaussian of matching
// variance, plus tail-envelope measurements used by regression tests.
struct LcltReport {
    double lambda = 0.0;
    long window_radius = 0;      // floor(lambda^{window_exponent})
    double max_rel_err = 0.0;    // max |Q-G|/G for |d| <= window
    double c1 = 0.0;             // max_rel_err * sqrt(lambda)
    double tail_gauss_ratio = 0.0;  // sup_{d > window} Q(d) exp(+0.25 d^2/lambda)
    double tail_log_constant = 0.0; // sup_{d > window} [ln d + ln Q(d) / d]
};
LcltReport lclt_comparison(double lambda, double window_exponent = 0.625);

// Boundary influence kernels of the half-interval heat problem on [-1,1]:
// p(t) collects the images returning to the same endpoint (offsets 4k),
// q(t) those reaching the opposite endpoint (offsets 4k+2).
double theta_p(double t);
double theta_q(double t);

// Free-evolution contribution of the initial profile u0 at the endpoint
// r = +1 (side plus) or r = -1 (side minus) at time t.
double theta_w(double t, Side side, const std::function<double(double)>& u0);

}  // namespace stir
