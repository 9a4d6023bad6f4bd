#include "stir/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stir/kernels.hpp"
#include "stir/numerics.hpp"

namespace stir {

ReactionTerms reaction_terms(double u, double j, int K) {
    if (K < 1) throw std::invalid_argument("reaction_terms: K >= 1 required");
    ReactionTerms r;
    r.f_plus = 0.5 * j * (1.0 - std::pow(u, K));
    r.f_minus = 0.5 * j * (1.0 - std::pow(1.0 - u, K));
    return r;
}

double BoundaryTrace::interp(Side side, double time) const {
    if (t.empty()) throw std::runtime_error("BoundaryTrace: empty");
    const auto& u = side == Side::plus ? u_plus : u_minus;
    if (time < -1e-12) throw std::invalid_argument("BoundaryTrace: negative time");
    if (time <= t.front()) return u.front();
    if (time >= t.back()) {
        if (time > t.back() + 1e-9 * (t.back() + 1.0))
            throw std::invalid_argument("BoundaryTrace: time beyond solved horizon");
        return u.back();
    }
    double pos = time / h;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= t.size()) i = t.size() - 2;
    double frac = (time - t[i]) / h;
    return u[i] * (1.0 - frac) + u[i + 1] * frac;
}

namespace {

// int_{a}^{b} K(s) ds for the theta kernels; the s^{-1/2} endpoint of p at
// s = 0 is removed by the substitution s = x^2.
double panel_weight(const std::function<double(double)>& kernel, double a, double b) {
    if (a == 0.0) {
        double sb = std::sqrt(b);
        return integrate_adaptive([&](double x) { return kernel(x * x) * 2.0 * x; }, 0.0, sb,
                                  1e-13, 1e-11);
    }
    return integrate_adaptive(kernel, a, b, 1e-13, 1e-11);
}

}  // namespace

BoundaryTrace solve_boundary_traces(const std::function<double(double)>& u0, double j, int K,
                                    double T, double h) {
    if (T <= 0.0 || h <= 0.0 || h > T)
        throw std::invalid_argument("solve_boundary_traces: need 0 < h <= T");
    if (K < 1) throw std::invalid_argument("solve_boundary_traces: K >= 1 required");
    if (j < 0.0) throw std::invalid_argument("solve_boundary_traces: j >= 0 required");

    const auto n_steps = static_cast<std::size_t>(std::llround(T / h));
    if (std::fabs(static_cast<double>(n_steps) * h - T) > 1e-9 * std::max(T, 1.0))
        throw std::invalid_argument("solve_boundary_traces: h must divide T evenly");
    BoundaryTrace tr;
    tr.j = j;
    tr.K = K;
    tr.h = h;
    tr.t.resize(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) tr.t[i] = static_cast<double>(i) * h;

    // convolution panel weights, shared across all marching steps
    std::vector<double> wp(n_steps), wq(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        wp[i] = panel_weight(theta_p, tr.t[i], tr.t[i + 1]);
        wq[i] = panel_weight(theta_q, tr.t[i], tr.t[i + 1]);
    }

    // contraction check for the implicit first panel
    const double lip = 0.5 * j * K;
    if ((wp[0] + wq[0]) * lip > 0.5)
        throw std::invalid_argument(
            "solve_boundary_traces: first panel not contractive, reduce h");

    std::vector<double> wfree_p(n_steps + 1), wfree_m(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        wfree_p[i] = theta_w(tr.t[i], Side::plus, u0);
        wfree_m[i] = theta_w(tr.t[i], Side::minus, u0);
    }

    tr.u_plus.assign(n_steps + 1, 0.0);
    tr.u_minus.assign(n_steps + 1, 0.0);
    tr.u_plus[0] = std::clamp(wfree_p[0], 0.0, 1.0);
    tr.u_minus[0] = std::clamp(wfree_m[0], 0.0, 1.0);

    auto clamp_track = [&tr](double v) {
        if (v < -1e-12 || v > 1.0 + 1e-12) ++tr.projections;
        return std::clamp(v, 0.0, 1.0);
    };

    for (std::size_t n = 1; n <= n_steps; ++n) {
        // history part: panels i >= 1 use the already-known values
        double hist_p = wfree_p[n];
        double hist_m = wfree_m[n];
        for (std::size_t i = 1; i < n; ++i) {
            double fp = reaction_terms(tr.u_plus[n - i], j, K).f_plus;
            double fm = reaction_terms(tr.u_minus[n - i], j, K).f_minus;
            hist_p += wp[i] * fp - wq[i] * fm;
            hist_m += wq[i] * fp - wp[i] * fm;
        }
        // implicit first panel, solved by fixed-point iteration
        double a = tr.u_plus[n - 1];
        double b = tr.u_minus[n - 1];
        for (int it = 0; it < 400; ++it) {
            double fa = reaction_terms(a, j, K).f_plus;
            double fb = reaction_terms(b, j, K).f_minus;
            double na = hist_p + wp[0] * fa - wq[0] * fb;
            double nb = hist_m + wq[0] * fa - wp[0] * fb;
            double delta = std::max(std::fabs(na - a), std::fabs(nb - b));
            a = na;
            b = nb;
            if (delta < 1e-14) break;
        }
        tr.u_plus[n] = clamp_track(a);
        tr.u_minus[n] = clamp_track(b);
    }

    // defect of the discretized system at the solved values
    for (std::size_t n = 1; n <= n_steps; ++n) {
        double rp = wfree_p[n] - tr.u_plus[n];
        double rm = wfree_m[n] - tr.u_minus[n];
        for (std::size_t i = 0; i < n; ++i) {
            double fp = reaction_terms(tr.u_plus[n - i], j, K).f_plus;
            double fm = reaction_terms(tr.u_minus[n - i], j, K).f_minus;
            rp += wp[i] * fp - wq[i] * fm;
            rm += wq[i] * fp - wp[i] * fm;
        }
        tr.residual = std::max({tr.residual, std::fabs(rp), std::fabs(rm)});
    }
    return tr;
}

double MacroField::interp(double r) const {
    if (values.empty()) throw std::runtime_error("MacroField: empty");
    const double R = 2.0 / dr;
    double pos = (r + 1.0) / dr;
    if (pos <= 0.0) return values.front();
    if (pos >= R) return values.back();
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) i = values.size() - 2;
    double frac = pos - static_cast<double>(i);
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

MacroField solve_macro(const std::function<double(double)>& u0, const BoundaryTrace& trace,
                       double t, const MacroGrid& grid) {
    if (t < 0.0) throw std::invalid_argument("solve_macro: t >= 0 required");
    const auto R = static_cast<std::size_t>(std::llround(2.0 / grid.dr));
    if (R < 2 || std::fabs(R * grid.dr - 2.0) > 1e-12)
        throw std::invalid_argument("solve_macro: dr must divide the interval evenly");

    MacroField field;
    field.dr = grid.dr;
    field.time = t;
    field.values.resize(R + 1);
    for (std::size_t i = 0; i <= R; ++i) field.values[i] = u0(-1.0 + grid.dr * i);
    if (t == 0.0) return field;

    std::vector<double>& u = field.values;
    u.front() = trace.interp(Side::minus, 0.0);
    u.back() = trace.interp(Side::plus, 0.0);

    const std::size_t n_inner = R - 1;
    std::vector<double> rhs(n_inner), diag(n_inner), work(n_inner);
    double now = 0.0;
    while (now < t - 1e-15) {
        double dt = std::min(grid.dt, t - now);
        double alpha = dt / (4.0 * grid.dr * grid.dr);
        double bm_new = trace.interp(Side::minus, now + dt);
        double bp_new = trace.interp(Side::plus, now + dt);
        for (std::size_t i = 0; i < n_inner; ++i) {
            double left = u[i];
            double right = u[i + 2];
            rhs[i] = (1.0 - 2.0 * alpha) * u[i + 1] + alpha * (left + right);
        }
        rhs.front() += alpha * bm_new;
        rhs.back() += alpha * bp_new;
        // Thomas solve of (1+2a) x_i - a x_{i-1} - a x_{i+1} = rhs
        double beta = 1.0 + 2.0 * alpha;
        diag[0] = beta;
        work[0] = rhs[0];
        for (std::size_t i = 1; i < n_inner; ++i) {
            double m = -alpha / diag[i - 1];
            diag[i] = beta + m * alpha;
            work[i] = rhs[i] - m * work[i - 1];
        }
        u[n_inner] = work[n_inner - 1] / diag[n_inner - 1];
        for (std::size_t i = n_inner - 1; i-- > 0;)
            u[i + 1] = (work[i] + alpha * u[i + 2]) / diag[i];
        u.front() = bm_new;
        u.back() = bp_new;
        now += dt;
    }
    return field;
}

double micro_macro_gap(const RhoField& rho, const MacroField& macro) {
    const auto& P = rho.params;
    double gap = 0.0;
    for (int x = -P.N; x <= P.N; ++x) {
        if (P.in_either_reservoir(x)) continue;
        double r = P.epsilon() * x;
        gap = std::max(gap, std::fabs(rho.at(x) - macro.interp(r)));
    }
    return gap;
}

}  // namespace stir
