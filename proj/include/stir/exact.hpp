#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "stir/lattice.hpp"
#include "stir/pde.hpp"

namespace stir {

// Full master equation on {0,1}^{2N+1}, states encoded as bitmasks with bit
// (x+N) giving the occupation of site x.  Feasible for N <= 7.
struct MasterOperator {
    LatticeParams params;
    std::size_t dim = 0;
    double uniform_rate = 0.0;        // max exit rate, used by uniformization
    std::vector<std::uint32_t> offsets;  // per-source slice into targets/rates
    std::vector<std::uint32_t> targets;
    std::vector<double> rates;
    std::vector<double> exit_rate;
};

MasterOperator build_generator(const LatticeParams& params);

// Distribution at time t from p0, by uniformization: Poisson mixture of
// powers of the jump chain I + L/Lambda, truncated once the Poisson tail
// drops below tol.  Output mass is 1 - O(tol); no renormalization.
std::vector<double> evolve_distribution(const MasterOperator& op, const std::vector<double>& p0,
                                        double t, double tol = 1e-12);

std::uint32_t config_bits(const LatticeParams& params, const std::vector<int>& sites);
std::vector<double> delta_distribution(const MasterOperator& op, std::uint32_t state);

// P[all sites of X occupied] under distribution p
double occupation_product(const LatticeParams& params, const std::vector<double>& p,
                          const std::vector<int>& X);
std::vector<double> site_marginals(const LatticeParams& params, const std::vector<double>& p);

// Centered correlation  v(X,t) = E prod_{x in X} (eta_t(x) - rho(x,t))
// with rho the mesoscopic solution started from eta0.  Exactly zero at t=0.
// Throws std::invalid_argument on repeated sites or N too large.
double exact_v(const LatticeParams& params, const std::vector<int>& X, double t,
               const std::vector<std::uint8_t>& eta0, double rho_tol = 1e-10);

// Values of v at one instant on a family of site sets; empty set -> 1,
// so that the pair term of the coupling operator closes.
struct VTable {
    std::map<std::vector<int>, double> values;
    double at(std::vector<int> X) const;
};
VTable build_v_table(const LatticeParams& params, const std::vector<double>& p,
                     const RhoField& rho, const std::vector<std::vector<int>>& sets);

// Gradient coupling operator acting on v-tables:
//   (A v)(X) = sum over adjacent pairs {x,y} in X of
//              (rho(x)-rho(y)) [v(X\x) - v(X\y)]
//            - (1/2)(rho(x)-rho(y))^2 v(X\{x,y}).
double a_operator(const VTable& v, const RhoField& rho, const std::vector<int>& X);

// Stirring generator acting on v as a set function: each lattice bond with
// exactly one endpoint in X moves that point at rate 1/2 (bonds inside X fix
// the set).  Multiplied by eps^-2 in the evolution identity.
double l0_set_operator(const LatticeParams& params, const VTable& v, const std::vector<int>& X);

// Verifies d/dt v(X,t) = eps^-2 [ L0 v + A v ](X) for reservoir-free X by
// Richardson-extrapolated centred differences on the exact v.
struct IdentityReport {
    double dvdt = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};
IdentityReport check_evolution_identity(const LatticeParams& params,
                                        const std::vector<std::uint8_t>& eta0,
                                        const std::vector<int>& X, double t, double dt);

}  // namespace stir
