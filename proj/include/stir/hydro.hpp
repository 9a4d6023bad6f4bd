#pragma once

#include <functional>
#include <vector>

#include "stir/pde.hpp"

namespace stir {

// Reservoir reaction strengths at density u: birth side sees
// f_plus(u) = (j/2)(1 - u^K) (a K-site window is blocked only when full),
// death side f_minus(u) = (j/2)(1 - (1-u)^K).
struct ReactionTerms {
    double f_plus = 0.0;
    double f_minus = 0.0;
};
ReactionTerms reaction_terms(double u, double j, int K);

// Boundary traces u_pm(t) of the macroscopic problem.  The birth wall obeys
//   u_+(t) = w_+(t) + int_0^t { p(s) f_+(u_+(t-s)) - q(s) f_-(u_-(t-s)) } ds
// and the death wall carries the opposite overall sign (a sink lowers its
// own trace and raises the far one),
//   u_-(t) = w_-(t) - int_0^t { p(s) f_-(u_-(t-s)) - q(s) f_+(u_+(t-s)) } ds.
// Swapping u -> 1-u exchanges the two equations, which pins the signs.
// Solved by product-rectangle marching with exact integrals of the weakly
// singular kernels over each panel and an implicit 2x2 fixed point for the
// newest values.
struct BoundaryTrace {
    double j = 0.0;
    int K = 1;
    double h = 0.0;
    std::vector<double> t;        // grid 0, h, 2h, ...
    std::vector<double> u_plus;   // trace at r = +1
    std::vector<double> u_minus;  // trace at r = -1
    double residual = 0.0;        // sup-norm defect of the discretized system
    int projections = 0;          // how many values needed clamping to [0,1]

    double interp(Side side, double time) const;
};
BoundaryTrace solve_boundary_traces(const std::function<double(double)>& u0, double j, int K,
                                    double T, double h);

// Crank-Nicolson solution of u_t = u_rr / 2 on (-1,1) with Dirichlet data
// taken from the traces and initial profile u0.
struct MacroField {
    double dr = 0.0;
    double time = 0.0;
    std::vector<double> values;  // on r_i = -1 + i dr

    double interp(double r) const;
};
struct MacroGrid {
    double dr = 1.0 / 400.0;
    double dt = 1.0 / 4000.0;
};
MacroField solve_macro(const std::function<double(double)>& u0, const BoundaryTrace& trace,
                       double t, const MacroGrid& grid = {});

// sup over non-reservoir sites of |rho(x) - u(eps x)|
double micro_macro_gap(const RhoField& rho, const MacroField& macro);

}  // namespace stir
