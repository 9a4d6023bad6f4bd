#include "stir/exact.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "stir/numerics.hpp"

namespace stir {

MasterOperator build_generator(const LatticeParams& params) {
    if (params.N > 7)
        throw std::invalid_argument("build_generator: N <= 7 required (state space 2^(2N+1))");
    MasterOperator op;
    op.params = params;
    const int M = params.n_sites();
    op.dim = std::size_t{1} << M;

    const double ex_rate = 0.5 / (params.epsilon() * params.epsilon());
    const double bd_rate = 0.5 * params.j / params.epsilon();

    op.offsets.assign(op.dim + 1, 0);
    op.exit_rate.assign(op.dim, 0.0);

    // two passes: count, then fill
    std::vector<std::uint32_t> degree(op.dim, 0);
    auto for_each_transition = [&](std::uint32_t s, auto&& emit) {
        for (int b = 0; b + 1 < M; ++b) {
            std::uint32_t mask = (1u << b) | (1u << (b + 1));
            bool differ = ((s >> b) & 1u) != ((s >> (b + 1)) & 1u);
            if (differ) emit(s ^ mask, ex_rate);
        }
        if (bd_rate > 0.0) {
            // birth: first empty site scanning down from the top of I_plus
            for (int idx = M - 1; idx >= M - params.K; --idx) {
                if (((s >> idx) & 1u) == 0u) {
                    emit(s | (1u << idx), bd_rate);
                    break;
                }
            }
            // death: first particle scanning up from the bottom of I_minus
            for (int idx = 0; idx <= params.K - 1; ++idx) {
                if (((s >> idx) & 1u) != 0u) {
                    emit(s ^ (1u << idx), bd_rate);
                    break;
                }
            }
        }
    };

    for (std::uint32_t s = 0; s < op.dim; ++s)
        for_each_transition(s, [&](std::uint32_t, double) { ++degree[s]; });
    for (std::uint32_t s = 0; s < op.dim; ++s) op.offsets[s + 1] = op.offsets[s] + degree[s];
    op.targets.resize(op.offsets.back());
    op.rates.resize(op.offsets.back());
    std::vector<std::uint32_t> cursor(op.offsets.begin(), op.offsets.end() - 1);
    for (std::uint32_t s = 0; s < op.dim; ++s) {
        for_each_transition(s, [&](std::uint32_t tgt, double r) {
            op.targets[cursor[s]] = tgt;
            op.rates[cursor[s]] = r;
            ++cursor[s];
            op.exit_rate[s] += r;
        });
        op.uniform_rate = std::max(op.uniform_rate, op.exit_rate[s]);
    }
    return op;
}

std::vector<double> evolve_distribution(const MasterOperator& op, const std::vector<double>& p0,
                                        double t, double tol) {
    if (p0.size() != op.dim) throw std::invalid_argument("evolve_distribution: dimension mismatch");
    if (t < 0.0) throw std::invalid_argument("evolve_distribution: t >= 0 required");
    if (t == 0.0 || op.uniform_rate == 0.0) return p0;

    const double lt = op.uniform_rate * t;
    std::vector<double> v = p0;
    std::vector<double> next(op.dim);
    std::vector<double> result(op.dim, 0.0);

    double weight_sum = 0.0;
    for (long k = 0;; ++k) {
        double w = std::exp(log_poisson_pmf(lt, k));
        if (w > 0.0) {
            for (std::size_t s = 0; s < op.dim; ++s) result[s] += w * v[s];
            weight_sum += w;
        }
        if (weight_sum >= 1.0 - tol && static_cast<double>(k) >= lt) break;
        if (k > 100000000L) throw std::runtime_error("evolve_distribution: truncation runaway");
        // v <- (I + L/Lambda) v, applied through the transition list
        for (std::size_t s = 0; s < op.dim; ++s)
            next[s] = v[s] * (1.0 - op.exit_rate[s] / op.uniform_rate);
        for (std::uint32_t s = 0; s < op.dim; ++s) {
            const double vs = v[s];
            if (vs == 0.0) continue;
            for (std::uint32_t e = op.offsets[s]; e < op.offsets[s + 1]; ++e)
                next[op.targets[e]] += vs * op.rates[e] / op.uniform_rate;
        }
        v.swap(next);
    }
    return result;
}

std::uint32_t config_bits(const LatticeParams& params, const std::vector<int>& sites) {
    std::uint32_t s = 0;
    for (int x : sites) {
        if (!params.contains(x)) throw std::invalid_argument("config_bits: site outside lattice");
        std::uint32_t bit = 1u << params.site_index(x);
        if (s & bit) throw std::invalid_argument("config_bits: repeated site");
        s |= bit;
    }
    return s;
}

std::vector<double> delta_distribution(const MasterOperator& op, std::uint32_t state) {
    if (state >= op.dim) throw std::invalid_argument("delta_distribution: state out of range");
    std::vector<double> p(op.dim, 0.0);
    p[state] = 1.0;
    return p;
}

double occupation_product(const LatticeParams& params, const std::vector<double>& p,
                          const std::vector<int>& X) {
    std::uint32_t need = config_bits(params, X);
    double sum = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s)
        if ((static_cast<std::uint32_t>(s) & need) == need) sum += p[s];
    return sum;
}

std::vector<double> site_marginals(const LatticeParams& params, const std::vector<double>& p) {
    std::vector<double> m(params.n_sites(), 0.0);
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (p[s] == 0.0) continue;
        for (int i = 0; i < params.n_sites(); ++i)
            if ((s >> i) & 1u) m[i] += p[s];
    }
    return m;
}

namespace {

void require_distinct(const std::vector<int>& X) {
    std::set<int> seen(X.begin(), X.end());
    if (seen.size() != X.size())
        throw std::invalid_argument("exact_v: repeated sites in X");
}

double centered_product(const LatticeParams& params, const std::vector<double>& p,
                        const RhoField& rho, const std::vector<int>& X) {
    double acc = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (p[s] == 0.0) continue;
        double prod = p[s];
        for (int x : X) {
            double occ = (s >> params.site_index(x)) & 1u;
            prod *= occ - rho.at(x);
        }
        acc += prod;
    }
    return acc;
}

}  // namespace

double exact_v(const LatticeParams& params, const std::vector<int>& X, double t,
               const std::vector<std::uint8_t>& eta0, double rho_tol) {
    if (params.N > 5) throw std::invalid_argument("exact_v: N <= 5 required");
    if (static_cast<int>(eta0.size()) != params.n_sites())
        throw std::invalid_argument("exact_v: eta0 size must be 2N+1");
    require_distinct(X);
    for (int x : X)
        if (!params.contains(x)) throw std::invalid_argument("exact_v: site outside lattice");

    std::vector<double> rho0(eta0.begin(), eta0.end());
    RhoField rho = evolve_rho(params, rho0, t, rho_tol);

    MasterOperator op = build_generator(params);
    std::uint32_t s0 = 0;
    for (int i = 0; i < params.n_sites(); ++i)
        if (eta0[i]) s0 |= 1u << i;
    std::vector<double> p = evolve_distribution(op, delta_distribution(op, s0), t, 1e-13);
    return centered_product(params, p, rho, X);
}

double VTable::at(std::vector<int> X) const {
    if (X.empty()) return 1.0;
    std::sort(X.begin(), X.end());
    auto it = values.find(X);
    if (it == values.end()) throw std::invalid_argument("VTable: set not tabulated");
    return it->second;
}

VTable build_v_table(const LatticeParams& params, const std::vector<double>& p,
                     const RhoField& rho, const std::vector<std::vector<int>>& sets) {
    VTable tab;
    for (auto X : sets) {
        std::sort(X.begin(), X.end());
        require_distinct(X);
        tab.values[X] = centered_product(params, p, rho, X);
    }
    return tab;
}

namespace {

std::vector<int> erase_sites(const std::vector<int>& X, int a, int b = INT32_MIN) {
    std::vector<int> out;
    out.reserve(X.size());
    for (int x : X)
        if (x != a && x != b) out.push_back(x);
    return out;
}

}  // namespace

double a_operator(const VTable& v, const RhoField& rho, const std::vector<int>& X) {
    double acc = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t k = i + 1; k < X.size(); ++k) {
            int x = X[i], y = X[k];
            if (std::abs(x - y) != 1) continue;
            double dr = rho.at(x) - rho.at(y);
            acc += dr * (v.at(erase_sites(X, x)) - v.at(erase_sites(X, y)));
            acc -= 0.5 * dr * dr * v.at(erase_sites(X, x, y));
        }
    }
    return acc;
}

double l0_set_operator(const LatticeParams& params, const VTable& v, const std::vector<int>& X) {
    const double vX = v.at(X);
    double acc = 0.0;
    std::set<int> members(X.begin(), X.end());
    for (int x : X) {
        for (int dir : {-1, +1}) {
            int y = x + dir;
            if (!params.contains(y)) continue;  // no bond through the wall
            if (members.count(y)) continue;     // internal bond fixes the set
            std::vector<int> moved = erase_sites(X, x);
            moved.push_back(y);
            acc += 0.5 * (v.at(moved) - vX);
        }
    }
    return acc;
}

IdentityReport check_evolution_identity(const LatticeParams& params,
                                        const std::vector<std::uint8_t>& eta0,
                                        const std::vector<int>& X, double t, double dt) {
    if (params.N > 4)
        throw std::invalid_argument("check_evolution_identity: N <= 4 required");
    require_distinct(X);
    if (X.empty()) throw std::invalid_argument("check_evolution_identity: X must be nonempty");
    for (int x : X) {
        if (!params.contains(x))
            throw std::invalid_argument("check_evolution_identity: site outside lattice");
        if (params.in_either_reservoir(x))
            throw std::invalid_argument(
                "check_evolution_identity: X must avoid the reservoir windows "
                "(the boundary remainder is not part of the checked identity)");
    }
    if (t <= 0.0 || dt <= 0.0 || dt * 2.0 >= t)
        throw std::invalid_argument("check_evolution_identity: need 0 < 2 dt < t");

    // sets needed at time t: X, its single-bond moves, and the erasures used
    // by the coupling operator
    std::vector<std::vector<int>> sets;
    auto add_set = [&](std::vector<int> Y) {
        std::sort(Y.begin(), Y.end());
        sets.push_back(std::move(Y));
    };
    add_set(X);
    std::set<int> members(X.begin(), X.end());
    for (int x : X)
        for (int dir : {-1, +1}) {
            int y = x + dir;
            if (!params.contains(y) || members.count(y)) continue;
            auto moved = erase_sites(X, x);
            moved.push_back(y);
            add_set(moved);
        }
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t k = i + 1; k < X.size(); ++k)
            if (std::abs(X[i] - X[k]) == 1) {
                add_set(erase_sites(X, X[i]));
                add_set(erase_sites(X, X[k]));
                if (X.size() > 2) add_set(erase_sites(X, X[i], X[k]));
            }

    MasterOperator op = build_generator(params);
    std::uint32_t s0 = 0;
    for (int i = 0; i < params.n_sites(); ++i)
        if (eta0[i]) s0 |= 1u << i;
    std::vector<double> rho0(eta0.begin(), eta0.end());
    const double rho_tol = 1e-11;

    auto v_of_X_at = [&](double s) {
        auto p = evolve_distribution(op, delta_distribution(op, s0), s, 1e-13);
        RhoField rho = evolve_rho(params, rho0, s, rho_tol);
        return centered_product(params, p, rho, X);
    };

    // Richardson-extrapolated centred difference
    double d_full = (v_of_X_at(t + dt) - v_of_X_at(t - dt)) / (2.0 * dt);
    double d_half = (v_of_X_at(t + 0.5 * dt) - v_of_X_at(t - 0.5 * dt)) / dt;
    IdentityReport rep;
    rep.dvdt = (4.0 * d_half - d_full) / 3.0;

    auto p_t = evolve_distribution(op, delta_distribution(op, s0), t, 1e-13);
    RhoField rho_t = evolve_rho(params, rho0, t, rho_tol);
    VTable tab = build_v_table(params, p_t, rho_t, sets);
    double eps = params.epsilon();
    rep.rhs = (l0_set_operator(params, tab, X) + a_operator(tab, rho_t, X)) / (eps * eps);
    rep.residual = std::fabs(rep.dvdt - rep.rhs);
    return rep;
}

}  // namespace stir
