#pragma once

#include <vector>

#include "stir/lattice.hpp"

namespace stir {

// Site-occupation density profile at one instant of macroscopic time.
struct RhoField {
    LatticeParams params;
    double time = 0.0;
    std::vector<double> values;  // indexed by x + N

    double at(int x) const { return values[params.site_index(x)]; }
};

// Graph Laplacian of [-N, N]: second difference in the interior, one-sided
// at the walls (no bonds leave the segment, so the walls reflect).
std::vector<double> discrete_laplacian(const LatticeParams& params, const std::vector<double>& f);

// Reservoir drift evaluated on a density profile: the rate at which the
// birth (side plus) or death (side minus) mechanism moves mass at site x,
// with the product over the outward sites closing the hierarchy.
// Throws std::invalid_argument when x is outside the corresponding window.
double boundary_drift(const LatticeParams& params, const std::vector<double>& f, Side side, int x);

// Mesoscopic evolution  d/dt rho = eps^-2 (1/2) Lap rho
//                              + eps^-1 (j/2) [1_{I+} D+ rho - 1_{I-} D- rho],
// integrated by an exponential trapezoidal rule: the stiff linear part acts
// exactly in the cosine eigenbasis of the Laplacian, the boundary reaction
// enters through phi-function weights, and step doubling controls the total
// error against `tol`.  Throws std::runtime_error on step-size underflow.
RhoField evolve_rho(const LatticeParams& params, const std::vector<double>& rho0, double t,
                    double tol);

// Nearest-neighbour differences rho(x+1) - rho(x), length 2N.
std::vector<double> gradient_profile(const RhoField& rho);

}  // namespace stir
