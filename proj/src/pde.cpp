#include "stir/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stir {

std::vector<double> discrete_laplacian(const LatticeParams& params, const std::vector<double>& f) {
    const int M = params.n_sites();
    if (static_cast<int>(f.size()) != M)
        throw std::invalid_argument("discrete_laplacian: profile size must be 2N+1");
    std::vector<double> out(M);
    for (int i = 0; i < M; ++i) {
        double acc = 0.0;
        if (i > 0) acc += f[i - 1] - f[i];
        if (i < M - 1) acc += f[i + 1] - f[i];
        out[i] = acc;
    }
    return out;
}

double boundary_drift(const LatticeParams& params, const std::vector<double>& f, Side side,
                      int x) {
    if (static_cast<int>(f.size()) != params.n_sites())
        throw std::invalid_argument("boundary_drift: profile size must be 2N+1");
    if (!params.in_reservoir(x, side))
        throw std::invalid_argument("boundary_drift: site outside the reservoir window");
    const auto& v = f;
    if (side == Side::plus) {
        // birth lands at x only when everything above x is occupied
        double prod = 1.0 - v[params.site_index(x)];
        for (int y = x + 1; y <= params.N; ++y) prod *= v[params.site_index(y)];
        return prod;
    }
    double prod = v[params.site_index(x)];
    for (int y = -params.N; y < x; ++y) prod *= 1.0 - v[params.site_index(y)];
    return prod;
}

namespace {

// Exact propagator of the half-Laplacian in the cosine eigenbasis
// phi_k(i) = cos(pi k (i + 1/2) / M), eigenvalue -4 sin^2(pi k / (2M)).
struct SpectralHeat {
    int M;
    std::vector<double> basis;  // row k, column i
    std::vector<double> eig;

    explicit SpectralHeat(int M_) : M(M_), basis(static_cast<size_t>(M_) * M_), eig(M_) {
        for (int k = 0; k < M; ++k) {
            eig[k] = -4.0 * std::pow(std::sin(M_PI * k / (2.0 * M)), 2);
            for (int i = 0; i < M; ++i)
                basis[static_cast<size_t>(k) * M + i] = std::cos(M_PI * k * (i + 0.5) / M);
        }
    }

    std::vector<double> to_coef(const std::vector<double>& rho) const {
        std::vector<double> coef(static_cast<size_t>(M));
        for (int k = 0; k < M; ++k) {
            const double* row = &basis[static_cast<size_t>(k) * M];
            double c = 0.0;
            for (int i = 0; i < M; ++i) c += row[i] * rho[static_cast<size_t>(i)];
            double norm = (k == 0) ? 1.0 / M : 2.0 / M;
            coef[static_cast<size_t>(k)] = c * norm;
        }
        return coef;
    }

    std::vector<double> from_coef(const std::vector<double>& coef) const {
        std::vector<double> rho(static_cast<size_t>(M));
        for (int i = 0; i < M; ++i) {
            double v = 0.0;
            for (int k = 0; k < M; ++k)
                v += coef[static_cast<size_t>(k)] * basis[static_cast<size_t>(k) * M + i];
            rho[static_cast<size_t>(i)] = v;
        }
        return rho;
    }

    // advance by macroscopic dt at diffusion coefficient eps^-2 / 2
    void advance(std::vector<double>& rho, double dt, double inv_eps2) const {
        auto coef = to_coef(rho);
        for (int k = 0; k < M; ++k)
            coef[static_cast<size_t>(k)] *= std::exp(0.5 * inv_eps2 * eig[k] * dt);
        rho = from_coef(coef);
    }
};

// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, stable for the
// large negative z of the stiff modes and with series fallback near zero
double phi1(double z) {
    if (std::fabs(z) < 1e-5) return 1.0 + z * (0.5 + z / 6.0);
    return std::expm1(z) / z;
}
double phi2(double z) {
    if (std::fabs(z) < 1e-4) return 0.5 + z * (1.0 / 6.0 + z / 24.0);
    return (std::expm1(z) - z) / (z * z);
}

std::vector<double> reaction(const LatticeParams& params, const std::vector<double>& rho) {
    std::vector<double> g(params.n_sites(), 0.0);
    if (params.j == 0.0) return g;
    const double amp = params.j / (2.0 * params.epsilon());
    for (int x = params.N - params.K + 1; x <= params.N; ++x)
        g[params.site_index(x)] += amp * boundary_drift(params, rho, Side::plus, x);
    for (int x = -params.N; x <= -params.N + params.K - 1; ++x)
        g[params.site_index(x)] -= amp * boundary_drift(params, rho, Side::minus, x);
    return g;
}

// One exponential trapezoidal step (ETD2RK): the heat semigroup acts
// exactly in the eigenbasis, the reaction enters through phi functions, so
// the step error never sees the stiff eigenvalues, only the drift's own
// variation along the flow.
void etd2_step(const LatticeParams& params, const SpectralHeat& heat, std::vector<double>& rho,
               double dt, double inv_eps2) {
    const int M = heat.M;
    auto cr = heat.to_coef(rho);
    auto ck1 = heat.to_coef(reaction(params, rho));

    std::vector<double> pred(static_cast<size_t>(M));
    for (int k = 0; k < M; ++k) {
        double z = 0.5 * inv_eps2 * heat.eig[k] * dt;
        pred[static_cast<size_t>(k)] = std::exp(z) * cr[static_cast<size_t>(k)] +
                                       dt * phi1(z) * ck1[static_cast<size_t>(k)];
    }
    auto rho_pred = heat.from_coef(pred);
    auto ck2 = heat.to_coef(reaction(params, rho_pred));

    for (int k = 0; k < M; ++k) {
        double z = 0.5 * inv_eps2 * heat.eig[k] * dt;
        pred[static_cast<size_t>(k)] +=
            dt * phi2(z) * (ck2[static_cast<size_t>(k)] - ck1[static_cast<size_t>(k)]);
    }
    rho = heat.from_coef(pred);
}

}  // namespace

RhoField evolve_rho(const LatticeParams& params, const std::vector<double>& rho0, double t,
                    double tol) {
    const int M = params.n_sites();
    if (static_cast<int>(rho0.size()) != M)
        throw std::invalid_argument("evolve_rho: profile size must be 2N+1");
    for (double v : rho0)
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("evolve_rho: densities must lie in [0,1]");
    if (t < 0.0) throw std::invalid_argument("evolve_rho: t >= 0 required");
    if (tol <= 0.0) throw std::invalid_argument("evolve_rho: tol > 0 required");

    RhoField field{params, t, rho0};
    if (t == 0.0) return field;

    const double inv_eps2 = 1.0 / (params.epsilon() * params.epsilon());
    SpectralHeat heat(M);

    if (params.j == 0.0) {
        // pure diffusion: single exact spectral jump
        heat.advance(field.values, t, inv_eps2);
        return field;
    }

    double remaining = t;
    double dt = std::min(t, 0.5 * params.epsilon() / std::max(params.j, 1.0));
    const double dt_floor = t * 1e-13;
    std::vector<double> big, small;
    while (remaining > 0.0) {
        dt = std::min(dt, remaining);
        big = field.values;
        etd2_step(params, heat, big, dt, inv_eps2);
        small = field.values;
        etd2_step(params, heat, small, 0.5 * dt, inv_eps2);
        etd2_step(params, heat, small, 0.5 * dt, inv_eps2);
        double err = 0.0;
        for (int i = 0; i < M; ++i) err = std::max(err, std::fabs(big[i] - small[i]));
        err /= 3.0;  // the step rule is second order
        const double budget = tol * dt / t;
        // the doubled-step comparison bottoms out at the roundoff of the
        // dense cosine transforms, which grows with the section size, so
        // accept there too: tighter budgets are not measurable
        const double floor = 16.0 * M * std::numeric_limits<double>::epsilon();
        if (err <= budget || err <= floor) {
            field.values = small;
            remaining -= dt;
        }
        double scale;
        if (err <= floor)
            scale = 2.0;  // roundoff regime: the comparison can't steer any finer
        else
            scale = 0.9 * std::cbrt(budget / err);
        dt *= std::clamp(scale, 0.2, 4.0);
        if (dt < dt_floor)
            throw std::runtime_error("evolve_rho: step size underflow (tol too tight?)");
    }
    return field;
}

std::vector<double> gradient_profile(const RhoField& rho) {
    const int M = rho.params.n_sites();
    std::vector<double> g(M - 1);
    for (int i = 0; i + 1 < M; ++i) g[i] = rho.values[i + 1] - rho.values[i];
    return g;
}

}  // namespace stir
