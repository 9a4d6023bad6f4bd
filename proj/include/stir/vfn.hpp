#pragma once

#include <functional>

#include "stir/pde.hpp"
#include "stir/sim.hpp"

namespace stir {

// Initial data for the occupation process: either one fixed configuration or
// a product measure with marginal u0(eps x).  Both make the centred product
// vanish identically at t = 0.
struct InitialCondition {
    SiteConfig config;
    std::function<double(double)> profile;
    bool product = false;

    static InitialCondition deterministic(SiteConfig c) {
        InitialCondition ic;
        ic.config = std::move(c);
        return ic;
    }
    static InitialCondition bernoulli(std::function<double(double)> u0) {
        InitialCondition ic;
        ic.profile = std::move(u0);
        ic.product = true;
        return ic;
    }
};

SiteConfig sample_initial(const LatticeParams& params, const InitialCondition& init,
                          Xoshiro256pp& rng);
std::vector<double> initial_density(const LatticeParams& params, const InitialCondition& init);

// Monte Carlo estimate of v(X,t) = E prod_{x in X} (eta_t(x) - rho(x,t)),
// with rho the mesoscopic solution from the same initial data.  The standard
// error comes from batch means over contiguous replica blocks.
struct VEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long replicas = 0;
    int batches = 0;
};
VEstimate estimate_v(const LatticeParams& params, const std::vector<int>& X, double t,
                     const InitialCondition& init, long replicas, std::uint64_t seed,
                     int threads = 1, double rho_tol = 1e-9);

// Empirical probability that the centred block average
//   (2w+1)^{-1} sum_{|y-x| <= w} (eta_t(y) - rho(y,t)),   w = floor(N^a),
// exceeds delta in absolute value for some admissible centre x.
struct BlockAverageReport {
    int half_width = 0;
    double threshold = 0.0;
    double frequency = 0.0;
    long replicas = 0;
};
BlockAverageReport block_average_test(const LatticeParams& params, const InitialCondition& init,
                                      double t, double a, double delta, long replicas,
                                      std::uint64_t seed, int threads = 1);

// sup over centres of |block average of eta0 - u0(eps x)| at time zero
double initial_profile_check(const LatticeParams& params, const SiteConfig& eta0,
                             const std::function<double(double)>& u0, double a);

}  // namespace stir
