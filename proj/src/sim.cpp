#include "stir/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stir {

namespace {

void validate_config(const LatticeParams& params, const SiteConfig& eta) {
    if (static_cast<int>(eta.size()) != params.n_sites())
        throw std::invalid_argument("site configuration must have 2N+1 entries");
    for (auto v : eta)
        if (v > 1) throw std::invalid_argument("site configuration must be 0/1 valued");
}

void validate_positions(const LatticeParams& params, const std::vector<int>& x0,
                        bool require_distinct) {
    if (x0.empty()) throw std::invalid_argument("need at least one particle");
    for (int z : x0)
        if (!params.contains(z)) throw std::invalid_argument("particle outside [-N, N]");
    if (require_distinct) {
        auto sorted = x0;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("particle positions must be distinct");
    }
}

}  // namespace

FullProcessResult run_full_process(const LatticeParams& params, const SiteConfig& eta0, double t,
                                   std::uint64_t seed, const std::vector<double>& sample_times) {
    validate_config(params, eta0);
    if (t < 0.0) throw std::invalid_argument("run_full_process: t >= 0 required");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < 0.0 || sample_times[i] > t)
            throw std::invalid_argument("run_full_process: sample times must lie in [0, t]");
        if (i > 0 && sample_times[i] < sample_times[i - 1])
            throw std::invalid_argument("run_full_process: sample times must be sorted");
    }

    Xoshiro256pp rng(seed);
    FullProcessResult res;
    SiteConfig cur = eta0;
    const int M = params.n_sites();
    const double inv_eps2 = 1.0 / (params.epsilon() * params.epsilon());
    const double rate_ex = (M - 1) * 0.5 * inv_eps2;
    const double rate_bd = params.j > 0.0 ? 0.5 * params.j / params.epsilon() : 0.0;
    const double rate_total = rate_ex + 2.0 * rate_bd;

    double now = 0.0;
    std::size_t si = 0;
    for (;;) {
        double next = now + rng.exponential(rate_total);
        while (si < sample_times.size() && sample_times[si] <= next) {
            res.samples.push_back(cur);
            ++si;
        }
        if (next >= t) break;
        now = next;
        double u = rng.uniform() * rate_total;
        if (u < rate_ex) {
            int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(M - 1)));
            if (cur[b] != cur[b + 1]) {
                std::swap(cur[b], cur[b + 1]);
                ++res.exchanges;
            }
        } else if (u < rate_ex + rate_bd) {
            // birth: first empty site scanning down from the top
            bool placed = false;
            for (int idx = M - 1; idx >= M - params.K; --idx) {
                if (!cur[idx]) {
                    cur[idx] = 1;
                    placed = true;
                    break;
                }
            }
            placed ? ++res.births : ++res.aborted_births;
        } else {
            bool removed = false;
            for (int idx = 0; idx <= params.K - 1; ++idx) {
                if (cur[idx]) {
                    cur[idx] = 0;
                    removed = true;
                    break;
                }
            }
            removed ? ++res.deaths : ++res.aborted_deaths;
        }
    }
    res.final_config = std::move(cur);
    return res;
}

MarksResult run_marks_stirring(const LatticeParams& params, const std::vector<int>& x0, double t,
                               std::uint64_t seed) {
    validate_positions(params, x0, true);
    if (t < 0.0) throw std::invalid_argument("run_marks_stirring: t >= 0 required");

    Xoshiro256pp rng(seed);
    MarksResult res;
    res.positions = x0;
    std::vector<int> label_at(params.n_sites(), -1);
    for (std::size_t i = 0; i < x0.size(); ++i) label_at[params.site_index(x0[i])] = (int)i;

    const double inv_eps2 = 1.0 / (params.epsilon() * params.epsilon());
    const int n_bonds = params.n_sites() + 1;  // left endpoints -N-1 .. N
    const double rate_total = n_bonds * inv_eps2;

    double now = 0.0;
    for (;;) {
        now += rng.exponential(rate_total);
        if (now >= t) break;
        int bond = -params.N - 1 + static_cast<int>(rng.below(n_bonds));
        bool active = rng.coin();
        res.marks.push_back({now, bond, active});
        if (!active) continue;
        if (bond < -params.N || bond + 1 > params.N) continue;  // inert outside
        int li = label_at[params.site_index(bond)];
        int lj = label_at[params.site_index(bond + 1)];
        if (li < 0 && lj < 0) continue;
        if (li >= 0 && lj >= 0) {
            std::swap(res.positions[li], res.positions[lj]);
            std::swap(label_at[params.site_index(bond)], label_at[params.site_index(bond + 1)]);
        } else if (li >= 0) {
            res.positions[li] = bond + 1;
            label_at[params.site_index(bond)] = -1;
            label_at[params.site_index(bond + 1)] = li;
        } else {
            res.positions[lj] = bond;
            label_at[params.site_index(bond + 1)] = -1;
            label_at[params.site_index(bond)] = lj;
        }
    }
    return res;
}

LabeledResult run_labeled_stirring(const LatticeParams& params, const std::vector<int>& x0,
                                   double t, Xoshiro256pp& rng) {
    validate_positions(params, x0, true);
    LabeledResult res;
    res.positions = x0;
    auto& pos = res.positions;
    const std::size_t n = pos.size();
    const double inv_eps2 = 1.0 / (params.epsilon() * params.epsilon());

    std::vector<int> label_at(params.n_sites(), -1);
    for (std::size_t i = 0; i < n; ++i) label_at[params.site_index(pos[i])] = (int)i;
    auto at = [&](int site) { return label_at[params.site_index(site)]; };

    struct Incident {
        int bond;
        int who;      // mover for single bonds, left particle for shared
        int partner;  // right particle for shared bonds, else -1
        double rate;
    };
    std::vector<Incident> inc;
    inc.reserve(3 * n);

    double now = 0.0;
    for (;;) {
        inc.clear();
        double rate_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int z = pos[i];
            if (z + 1 <= params.N) {
                int r = at(z + 1);
                if (r >= 0)
                    inc.push_back({z, (int)i, r, inv_eps2});  // shared: any mark counts
                else
                    inc.push_back({z, (int)i, -1, 0.5 * inv_eps2});  // active marks move
            }
            if (z - 1 >= -params.N && at(z - 1) < 0)
                inc.push_back({z - 1, (int)i, -1, 0.5 * inv_eps2});
        }
        for (const auto& e : inc) rate_total += e.rate;

        now += rng.exponential(rate_total);
        if (now >= t) break;

        double u = rng.uniform() * rate_total;
        std::size_t pick = 0;
        for (; pick + 1 < inc.size(); ++pick) {
            if (u < inc[pick].rate) break;
            u -= inc[pick].rate;
        }
        const Incident& e = inc[pick];
        if (e.partner >= 0) {
            bool pair01 = (e.who == 0 && e.partner == 1) || (e.who == 1 && e.partner == 0);
            if (pair01 && std::isinf(res.tau12)) res.tau12 = now;
            if (rng.coin()) {  // active half swaps the labels
                std::swap(pos[e.who], pos[e.partner]);
                std::swap(label_at[params.site_index(pos[e.who])],
                          label_at[params.site_index(pos[e.partner])]);
            }
        } else {
            int from = pos[e.who];
            int to = from == e.bond ? e.bond + 1 : e.bond;
            label_at[params.site_index(from)] = -1;
            label_at[params.site_index(to)] = e.who;
            pos[e.who] = to;
        }
    }
    return res;
}

std::vector<PairStats> pair_stats(const LatticeParams& params, int x1, int x2, double t,
                                  long replicas, std::uint64_t seed, int threads,
                                  bool survival_only) {
    validate_positions(params, {x1, x2}, true);
    if (t <= 0.0) throw std::invalid_argument("pair_stats: t > 0 required");
    if (replicas < 1) throw std::invalid_argument("pair_stats: replicas >= 1 required");
    const int lo0 = std::min(x1, x2), hi0 = std::max(x1, x2);
    const double inv_eps2 = 1.0 / (params.epsilon() * params.epsilon());
    const int N = params.N;

    std::function<PairStats(long)> one = [&](long rep) {
        Xoshiro256pp rng = replica_rng(seed, static_cast<std::uint64_t>(rep));
        PairStats st;
        int a = lo0, b = hi0;  // the order never changes: swaps fix the set
        double now = 0.0;
        for (;;) {
            const bool adjacent = (b - a == 1);
            double r_shared = adjacent ? inv_eps2 : 0.0;
            double r_a_left = (a - 1 >= -N) ? 0.5 * inv_eps2 : 0.0;
            double r_a_right = (!adjacent) ? 0.5 * inv_eps2 : 0.0;  // a+1 <= N always
            double r_b_left = (!adjacent) ? 0.5 * inv_eps2 : 0.0;
            double r_b_right = (b + 1 <= N) ? 0.5 * inv_eps2 : 0.0;
            double rate = r_shared + r_a_left + r_a_right + r_b_left + r_b_right;

            double next = now + rng.exponential(rate);
            if (next >= t) {
                if (adjacent) st.time_together += t - now;
                break;
            }
            if (adjacent) st.time_together += next - now;
            now = next;

            double u = rng.uniform() * rate;
            if (u < r_shared) {
                if (std::isinf(st.tau)) st.tau = now;
                ++st.n_marks;
                if (survival_only) break;
                // attribute only swaps the labels; the pair set is unchanged
            } else if (u < r_shared + r_a_left) {
                --a;
            } else if (u < r_shared + r_a_left + r_a_right) {
                ++a;
            } else if (u < r_shared + r_a_left + r_a_right + r_b_left) {
                --b;
            } else {
                ++b;
            }
        }
        return st;
    };
    return run_replicas<PairStats>(replicas, threads, one);
}

DualityMcReport duality_check(const LatticeParams& params, const std::vector<int>& X,
                              const SiteConfig& eta0, double t, long replicas,
                              std::uint64_t seed, int threads) {
    validate_config(params, eta0);
    validate_positions(params, X, true);
    if (replicas < 2) throw std::invalid_argument("duality_check: replicas >= 2 required");
    // duality is a statement about the pure stirring dynamics
    LatticeParams stir_only(params.N, params.K, 0.0);

    std::function<char(long)> fwd = [&](long rep) {
        auto r = run_full_process(stir_only, eta0, t, derive_seed(seed, (std::uint64_t)rep));
        for (int x : X)
            if (!r.final_config[stir_only.site_index(x)]) return char(0);
        return char(1);
    };
    std::function<char(long)> dual = [&](long rep) {
        Xoshiro256pp rng = replica_rng(seed ^ 0x5851f42d4c957f2dULL, (std::uint64_t)rep);
        auto r = run_labeled_stirring(stir_only, X, t, rng);
        for (int z : r.positions)
            if (!eta0[stir_only.site_index(z)]) return char(0);
        return char(1);
    };

    auto f = run_replicas<char>(replicas, threads, fwd);
    auto d = run_replicas<char>(replicas, threads, dual);
    DualityMcReport rep;
    rep.replicas = replicas;
    long cf = std::count(f.begin(), f.end(), char(1));
    long cd = std::count(d.begin(), d.end(), char(1));
    rep.forward_mean = static_cast<double>(cf) / replicas;
    rep.dual_mean = static_cast<double>(cd) / replicas;
    double var = rep.forward_mean * (1.0 - rep.forward_mean) / replicas +
                 rep.dual_mean * (1.0 - rep.dual_mean) / replicas;
    rep.z_score = var > 0.0 ? (rep.forward_mean - rep.dual_mean) / std::sqrt(var) : 0.0;
    return rep;
}

AntisymmetryReport antisymmetry_check(const LatticeParams& params, const std::vector<int>& x0,
                                      double s, double t,
                                      const std::function<double(const std::vector<int>&)>& f,
                                      long replicas, std::uint64_t seed, int threads) {
    if (x0.size() < 2) throw std::invalid_argument("antisymmetry_check: need >= 2 particles");
    if (s < 0.0 || s > t) throw std::invalid_argument("antisymmetry_check: need 0 <= s <= t");
    if (replicas < 2) throw std::invalid_argument("antisymmetry_check: replicas >= 2 required");

    std::function<double(long)> one = [&](long rep) {
        Xoshiro256pp rng = replica_rng(seed, (std::uint64_t)rep);
        auto r = run_labeled_stirring(params, x0, t, rng);
        return r.tau12 <= s ? f(r.positions) : 0.0;
    };
    auto vals = run_replicas<double>(replicas, threads, one);
    double sum = 0.0;
    for (double v : vals) sum += v;
    AntisymmetryReport rep;
    rep.replicas = replicas;
    rep.mean = sum / replicas;
    double ss = 0.0;
    for (double v : vals) ss += (v - rep.mean) * (v - rep.mean);
    rep.std_error = std::sqrt(ss / (replicas - 1.0) / replicas);
    rep.z_score = rep.std_error > 0.0 ? rep.mean / rep.std_error : 0.0;
    return rep;
}

CouplingResult run_coupling(const LatticeParams& params, const std::vector<int>& x0,
                            const std::vector<int>& priority, double t, std::uint64_t seed,
                            const CouplingOptions& opts) {
    validate_positions(params, x0, true);
    const std::size_t n = x0.size();
    if (priority.size() != n)
        throw std::invalid_argument("run_coupling: priority list size mismatch");
    {
        std::vector<int> sorted = priority;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i)
            if (sorted[i] != static_cast<int>(i))
                throw std::invalid_argument("run_coupling: priority must be a permutation of 0..n-1");
    }

    Xoshiro256pp rng(seed);
    CouplingResult res;
    res.stirring = x0;
    res.independent = x0;
    res.collision_marks_per_particle.assign(n, 0);
    if (opts.record_jumps) {
        res.jumps_right.resize(n);
        res.jumps_left.resize(n);
    }

    auto& x = res.stirring;
    auto& shadow = res.independent;
    std::vector<int> label_at(params.n_sites(), -1);
    for (std::size_t i = 0; i < n; ++i) label_at[params.site_index(x[i])] = (int)i;
    auto at = [&](int site) {
        if (site < -params.N || site > params.N) return -1;
        return label_at[params.site_index(site)];
    };
    std::size_t top = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (priority[i] < priority[top]) top = i;

    const double inv_eps2 = 1.0 / (params.epsilon() * params.epsilon());
    double now = 0.0;

    auto shadow_jump = [&](std::size_t p, int dir) {
        if (opts.record_jumps) (dir > 0 ? res.jumps_right : res.jumps_left)[p].push_back(now);
        int target = shadow[p] + dir;
        if (params.contains(target))
            shadow[p] = target;
        else
            ++res.suppressed_jumps;
    };

    std::vector<int> bonds;
    bonds.reserve(2 * n);
    for (;;) {
        // marks only matter on bonds touching a stirring particle; the
        // enlarged set [-N-1, N] keeps the wall bonds in play
        bonds.clear();
        for (std::size_t i = 0; i < n; ++i) {
            bonds.push_back(x[i] - 1);
            bonds.push_back(x[i]);
        }
        std::sort(bonds.begin(), bonds.end());
        bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());

        double rate = static_cast<double>(bonds.size()) * inv_eps2;
        now += rng.exponential(rate);
        if (now >= t) break;

        int bond = bonds[rng.below(bonds.size())];
        bool active = rng.coin();
        int li = at(bond);
        int lj = at(bond + 1);

        if (li >= 0 && lj >= 0) {
            ++res.collision_marks;
            ++res.collision_marks_per_particle[li];
            ++res.collision_marks_per_particle[lj];
            std::size_t hi = priority[li] < priority[lj] ? li : lj;
            std::size_t lo = hi == static_cast<std::size_t>(li) ? lj : li;
            if (active) {
                int dir = x[lo] - x[hi];
                std::swap(label_at[params.site_index(x[hi])], label_at[params.site_index(x[lo])]);
                std::swap(x[hi], x[lo]);
                shadow_jump(hi, dir);
            } else {
                int dir = x[hi] - x[lo];
                shadow_jump(lo, dir);
            }
        } else if (li >= 0 || lj >= 0) {
            std::size_t p = li >= 0 ? li : lj;
            bool interior = bond >= -params.N && bond + 1 <= params.N;
            if (interior) {
                if (active) {
                    int to = (li >= 0) ? bond + 1 : bond;
                    int dir = to - x[p];
                    label_at[params.site_index(x[p])] = -1;
                    label_at[params.site_index(to)] = (int)p;
                    x[p] = to;
                    shadow_jump(p, dir);
                }
            } else if (active) {
                // wall bond: only the shadow feels it, pushed outward
                shadow_jump(p, bond == -params.N - 1 ? -1 : +1);
            }
        }
        if (opts.track_identity && x[top] != shadow[top]) res.top_priority_agreed = false;
    }
    res.auxiliary = res.independent;
    return res;
}

}  // namespace stir
