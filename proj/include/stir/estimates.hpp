#pragma once

#include <vector>

#include "stir/lattice.hpp"

namespace stir {

// n-fold iterated integral of the square-root kernel:
//   a_0 = 1,  a_n(t) = int_0^t (t-s)^{-1/2} a_{n-1}(s) ds.
// Scaling gives a_n(t) = c_n t^{n/2} with c_n = c_{n-1} * J_n and
// J_n = B(1/2, (n+1)/2), computed as int_0^{pi/2} 2 sin^n theta dtheta so the
// endpoint singularity never appears.  Requires n <= 30.
double iterated_kernel_an(int n, double t);

// closed form (pi t)^{n/2} / Gamma(n/2 + 1)
double an_closed_form(int n, double t);

// elementary bound (pi t)^{n/2} (n/2)^{-n/2} e^{n/2} from Stirling
double an_upper_bound(int n, double t);

struct SeriesBoundReport {
    double sum = 0.0;              // sum_{n=1}^{n_max} a_n(t)
    double growth_constant = 0.0;  // sum / e^{pi t}
    double max_ratio_defect = 0.0; // consistency of a_{n+2}/a_n = pi t/(n/2+1)
};
SeriesBoundReport an_series_bound(double t, int n_max);

// sup_x | sum_z P_{eps^{1+b}}(x, z) f(z) |: the profile f smoothed over the
// diffusive scale N^{(1-b)/2} before taking the sup norm.
double smoothed_norm(const LatticeParams& params, const std::vector<double>& f, double b);

}  // namespace stir
