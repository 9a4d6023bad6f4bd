// Acceptance suite for the stirring-process artifact.  Eight criteria, one
// pass/fail line each, fixed seeds and pinned tolerances.  Exit code is the
// number of failed criteria.
//
// Instances that involve Monte Carlo use seeds chosen once; every estimator
// here is unbiased, the seeds only avoid the few-percent chance of a false
// alarm at a 3-sigma style threshold.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "stir/estimates.hpp"
#include "stir/exact.hpp"
#include "stir/hydro.hpp"
#include "stir/io.hpp"
#include "stir/kernels.hpp"
#include "stir/lattice.hpp"
#include "stir/numerics.hpp"
#include "stir/pde.hpp"
#include "stir/rng.hpp"
#include "stir/sim.hpp"
#include "stir/vfn.hpp"

#include "oracles.hpp"

using namespace stir;

namespace {

std::string sfmt(const char* fmt, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    return std::string(buf);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

struct Criterion {
    bool ok = false;
    std::string detail;
};

// ------------------------------------------------------------- criterion 1
// Exact small systems: duality at j = 0, Chapman-Kolmogorov, v identically
// zero at time zero, and the closed evolution identity for the centred
// correlations on reservoir-free site sets.

std::vector<std::vector<int>> all_sets_up_to_pairs(int N) {
    std::vector<std::vector<int>> sets;
    for (int x = -N; x <= N; ++x) sets.push_back({x});
    for (int x = -N; x <= N; ++x)
        for (int y = x + 1; y <= N; ++y) sets.push_back({x, y});
    return sets;
}

Criterion criterion_exact() {
    double duality_max = 0.0, ck_max = 0.0, v0_max = 0.0, evo_max = 0.0;
    Xoshiro256pp rng(0xACCE55u);

    for (int N : {2, 3}) {
        const int n = 2 * N + 1;
        const std::uint32_t full = (1u << n) - 1u;

        // duality is a statement about the pure stirring dynamics
        LatticeParams ps0(N, 1, 0.0);
        MasterOperator op0 = build_generator(ps0);
        auto sets = all_sets_up_to_pairs(N);
        for (int trial = 0; trial < 5; ++trial) {
            std::uint32_t eta_bits = static_cast<std::uint32_t>(rng()) & full;
            auto p_fwd = evolve_distribution(op0, delta_distribution(op0, eta_bits), 0.5, 1e-13);
            for (const auto& X : sets) {
                std::uint32_t xb = config_bits(ps0, X);
                auto p_dual =
                    evolve_distribution(op0, delta_distribution(op0, xb), 0.5, 1e-13);
                double dual = 0.0;
                for (std::size_t s = 0; s < p_dual.size(); ++s)
                    if ((static_cast<std::uint32_t>(s) & ~eta_bits) == 0u) dual += p_dual[s];
                double fwd = occupation_product(ps0, p_fwd, X);
                duality_max = std::max(duality_max, std::fabs(fwd - dual));
            }
        }

        // Chapman-Kolmogorov with live reservoirs
        LatticeParams ps1(N, 1, 1.0);
        MasterOperator op1 = build_generator(ps1);
        std::uint32_t eta_bits = 0b1011010u & full;
        auto p_half = evolve_distribution(op1, delta_distribution(op1, eta_bits), 0.3, 1e-13);
        auto p_two = evolve_distribution(op1, p_half, 0.2, 1e-13);
        auto p_one = evolve_distribution(op1, delta_distribution(op1, eta_bits), 0.5, 1e-13);
        for (std::size_t s = 0; s < p_one.size(); ++s)
            ck_max = std::max(ck_max, std::fabs(p_two[s] - p_one[s]));

        // v(. , 0) vanishes identically
        std::vector<std::uint8_t> eta0(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) eta0[static_cast<std::size_t>(i)] = (eta_bits >> i) & 1u;
        for (const auto& X : {std::vector<int>{0}, std::vector<int>{-1, 1},
                              std::vector<int>{N - 1, N}}) {
            v0_max = std::max(v0_max, std::fabs(exact_v(ps1, X, 0.0, eta0)));
        }
    }

    // evolution identity on interior sets, sizes one and two
    {
        LatticeParams ps(2, 1, 1.0);
        std::vector<std::uint8_t> eta0{1, 1, 0, 1, 0};
        for (const auto& X : {std::vector<int>{0}, std::vector<int>{-1, 0},
                              std::vector<int>{-1, 1}, std::vector<int>{0, 1}}) {
            auto rep = check_evolution_identity(ps, eta0, X, 0.3, 1e-3);
            evo_max = std::max(evo_max, rep.residual);
        }
    }
    {
        LatticeParams ps(3, 1, 1.0);
        std::vector<std::uint8_t> eta0{0, 1, 1, 0, 1, 1, 0};
        for (const auto& X : {std::vector<int>{0}, std::vector<int>{-2, 2},
                              std::vector<int>{1, 2}, std::vector<int>{-1, 0}}) {
            auto rep = check_evolution_identity(ps, eta0, X, 0.3, 1e-3);
            evo_max = std::max(evo_max, rep.residual);
        }
    }
    {
        LatticeParams ps(3, 2, 1.0);  // wider reservoir window, interior is [-1,1]
        std::vector<std::uint8_t> eta0{1, 0, 1, 1, 0, 1, 0};
        for (const auto& X : {std::vector<int>{0}, std::vector<int>{-1, 1},
                              std::vector<int>{0, 1}}) {
            auto rep = check_evolution_identity(ps, eta0, X, 0.25, 1e-3);
            evo_max = std::max(evo_max, rep.residual);
        }
    }

    bool ok = duality_max <= 1e-9 && ck_max <= 1e-9 && v0_max == 0.0 && evo_max <= 1e-5;
    return {ok, sfmt("duality %.2e<=1e-9, chap-kolm %.2e<=1e-9, v(.,0) %.1e==0, "
                     "identity %.2e<=1e-5",
                     duality_max, ck_max, v0_max, evo_max)};
}

// ------------------------------------------------------------- criterion 2
// Monte Carlo against the master equation: site marginals of the full
// process at two times, and the centred-correlation estimator for a pair.

Criterion criterion_mc_oracle() {
    LatticeParams ps(3, 1, 1.0);
    const int n = ps.n_sites();
    SiteConfig eta0{1, 0, 1, 0, 1, 0, 1};

    MasterOperator op = build_generator(ps);
    std::uint32_t bits = 0;
    for (int i = 0; i < n; ++i)
        if (eta0[static_cast<std::size_t>(i)]) bits |= 1u << i;
    auto m02 = site_marginals(ps, evolve_distribution(op, delta_distribution(op, bits), 0.2));
    auto m10 = site_marginals(ps, evolve_distribution(op, delta_distribution(op, bits), 1.0));

    const long R = 100000;
    const std::uint64_t seed = 0x5EEDA2u;
    struct Counts {
        std::array<int, 7> a{}, b{};
    };
    auto res = run_replicas<Counts>(R, 2, [&](long i) {
        auto r = run_full_process(ps, eta0, 1.0, derive_seed(seed, static_cast<std::uint64_t>(i)),
                                  {0.2, 1.0});
        Counts c;
        for (int x = 0; x < n; ++x) {
            c.a[static_cast<std::size_t>(x)] = r.samples[0][static_cast<std::size_t>(x)];
            c.b[static_cast<std::size_t>(x)] = r.samples[1][static_cast<std::size_t>(x)];
        }
        return c;
    });
    double max_z = 0.0;
    for (int x = 0; x < n; ++x) {
        long ca = 0, cb = 0;
        for (const auto& c : res) {
            ca += c.a[static_cast<std::size_t>(x)];
            cb += c.b[static_cast<std::size_t>(x)];
        }
        double fa = static_cast<double>(ca) / R, fb = static_cast<double>(cb) / R;
        double sa = std::sqrt(m02[static_cast<std::size_t>(x)] *
                              (1.0 - m02[static_cast<std::size_t>(x)]) / R);
        double sb = std::sqrt(m10[static_cast<std::size_t>(x)] *
                              (1.0 - m10[static_cast<std::size_t>(x)]) / R);
        max_z = std::max(max_z, std::fabs(fa - m02[static_cast<std::size_t>(x)]) / sa);
        max_z = std::max(max_z, std::fabs(fb - m10[static_cast<std::size_t>(x)]) / sb);
    }

    // pair correlation estimator against the exact value
    std::vector<int> X{-1, 1};
    double exact = exact_v(ps, X, 0.2, eta0);
    VEstimate est = estimate_v(ps, X, 0.2, InitialCondition::deterministic(eta0), 100000,
                               0x5EEDB3u, 2);
    double dev_sig = std::fabs(est.value - exact) / est.std_error;

    bool ok = max_z <= 3.0 && dev_sig <= 3.0;
    return {ok, sfmt("marginal max|z| %.2f<=3 (14 cells, 1e5 reps), v-estimator |dev| %.2fsigma<=3",
                     max_z, dev_sig)};
}

// ------------------------------------------------------------- criterion 3
// Pair statistics: survival exponent of an adjacent pair, and the tail of
// the inter-particle mark count for a well-separated pair.

Criterion criterion_pair() {
    // survival: adjacent start in a large segment, log-log slope of P[tau>=s]
    LatticeParams ps(100, 1, 0.0);
    const long R = 200000;
    auto stats = pair_stats(ps, 0, 1, 1.0, R, 0x3A5107u, 2, /*survival_only=*/true);
    std::vector<double> lx, ly;
    for (int k = 0; k <= 12; ++k) {
        double lam = 100.0 * std::pow(10.0, 2.0 * k / 12.0);  // eps^-2 s in [1e2, 1e4]
        double s = lam * ps.epsilon() * ps.epsilon();
        long alive = 0;
        for (const auto& st : stats)
            if (st.tau >= s) ++alive;
        lx.push_back(std::log(lam));
        ly.push_back(std::log(static_cast<double>(alive) / R));
    }
    double slope = least_squares_fit(lx, ly).slope;

    // mark-count tail: separated pair, threshold (eps^-2 t)^{0.6}
    LatticeParams pw(500, 1, 0.0);
    const double t = 0.04;  // eps^-2 t = 1e4
    const double thr = std::pow(1e4, 0.6);
    const long Rw = 10000;
    auto tail = pair_stats(pw, -125, 125, t, Rw, 0x3B7A11u, 2);
    long hits = 0;
    for (const auto& st : tail)
        if (static_cast<double>(st.n_marks) >= thr) ++hits;
    double freq = static_cast<double>(hits) / Rw;

    bool ok = std::fabs(slope + 0.5) <= 0.1 && freq <= 0.01;
    return {ok, sfmt("survival slope %.3f in -0.5+-0.1, mark tail freq %.4f<=0.01 "
                     "(threshold %.2f marks)",
                     slope, freq, thr)};
}

// ------------------------------------------------------------- criterion 4
// Priority coupling: the top-priority particle never separates from its
// shadow, the shadows are honest reflected walks, and the lowest-priority
// deviation obeys the quarter-power threshold.

Criterion criterion_coupling() {
    bool agreed = true;

    // marginal run: moderate box, long horizon, chi-square for each shadow
    LatticeParams ps(20, 1, 0.0);
    std::vector<int> x0{-10, 0, 10};
    std::vector<int> prio{0, 1, 2};
    const long R = 10000;
    auto runs = run_replicas<CouplingResult>(R, 2, [&](long i) {
        return run_coupling(ps, x0, prio, 0.5, derive_seed(0x4C0DE1u, static_cast<std::uint64_t>(i)));
    });
    double chi_worst_p = 1.0;
    double chi_max_stat = 0.0;
    for (std::size_t particle = 0; particle < x0.size(); ++particle) {
        std::vector<long> obs(static_cast<std::size_t>(ps.n_sites()), 0);
        for (const auto& r : runs) {
            agreed = agreed && r.top_priority_agreed;
            ++obs[static_cast<std::size_t>(r.independent[particle] + ps.N)];
        }
        auto row = reflected_walk_row(ps, 0.5, x0[particle]);
        // greedy pooling so every expected count is at least five; any
        // trailing remainder merges into the last closed bin
        std::vector<double> be, bo;
        double eacc = 0.0, oacc = 0.0;
        for (int z = 0; z < ps.n_sites(); ++z) {
            eacc += R * row[static_cast<std::size_t>(z)];
            oacc += static_cast<double>(obs[static_cast<std::size_t>(z)]);
            if (eacc >= 5.0) {
                be.push_back(eacc);
                bo.push_back(oacc);
                eacc = oacc = 0.0;
            }
        }
        if (eacc > 0.0) {
            be.back() += eacc;
            bo.back() += oacc;
        }
        double stat = 0.0;
        for (std::size_t k = 0; k < be.size(); ++k)
            stat += (bo[k] - be[k]) * (bo[k] - be[k]) / be[k];
        int dof = static_cast<int>(be.size()) - 1;
        double q = chi_square_quantile(0.99, dof);
        chi_max_stat = std::max(chi_max_stat, stat / q);  // normalized: <1 passes
        chi_worst_p = std::min(chi_worst_p, 1.0 - chi_square_cdf(stat, dof));
    }

    // deviation run: wide box, short horizon, lowest-priority particle
    LatticeParams pw(1000, 1, 0.0);
    std::vector<int> xw{-150, 0, 150};
    const double t = 0.01;  // eps^-2 t = 1e4
    const double thr = std::pow(1e4, 0.3);
    auto devs = run_replicas<CouplingResult>(R, 2, [&](long i) {
        return run_coupling(pw, xw, prio, t, derive_seed(0x4C0DE2u, static_cast<std::uint64_t>(i)));
    });
    long exceed = 0;
    for (const auto& r : devs) {
        agreed = agreed && r.top_priority_agreed;
        if (std::abs(r.stirring[2] - r.independent[2]) >= thr) ++exceed;
    }
    double freq = static_cast<double>(exceed) / R;

    bool ok = agreed && chi_max_stat < 1.0 && freq <= 0.05;
    return {ok, sfmt("top-priority identity %s (2x1e4 reps), chi-square worst p %.3f>0.01, "
                     "deviation freq %.4f<=0.05 (threshold %.2f sites)",
                     agreed ? "held" : "BROKEN", chi_worst_p, freq, thr)};
}

// ------------------------------------------------------------- criterion 5
// Reflected kernel: stochastic rows, agreement with a dense matrix
// exponential, and the local-CLT window error.

Criterion criterion_kernel() {
    double row_dev = 0.0;
    for (double t : {0.01, 0.5, 5.0}) {
        LatticeParams ps(25, 1, 0.0);
        for (int x = -ps.N; x <= ps.N; ++x) {
            auto row = reflected_walk_row(ps, t, x);
            double s = std::accumulate(row.begin(), row.end(), 0.0);
            row_dev = std::max(row_dev, std::fabs(s - 1.0));
        }
    }

    double expm_dev = 0.0;
    {
        LatticeParams ps(6, 1, 0.0);
        auto Q = oracle::walker_generator(ps);
        for (double t : {0.05, 0.7}) {
            auto Qt = Q;
            for (auto& r : Qt)
                for (double& v : r) v *= t;
            auto P = oracle::expm(Qt);
            for (int x = -ps.N; x <= ps.N; ++x) {
                auto row = reflected_walk_row(ps, t, x);
                for (int z = -ps.N; z <= ps.N; ++z)
                    expm_dev = std::max(
                        expm_dev,
                        std::fabs(row[static_cast<std::size_t>(z + ps.N)] -
                                  P[static_cast<std::size_t>(x + ps.N)]
                                   [static_cast<std::size_t>(z + ps.N)]));
            }
        }
    }

    double lclt_worst = 0.0;  // max over lambda of max_rel_err / (5/sqrt(lambda))
    for (double lam : {100.0, 400.0, 1600.0}) {
        auto rep = lclt_comparison(lam);
        lclt_worst = std::max(lclt_worst, rep.max_rel_err / (5.0 / std::sqrt(lam)));
    }

    bool ok = row_dev <= 1e-10 && expm_dev <= 1e-8 && lclt_worst < 1.0;
    return {ok, sfmt("row sums %.2e<=1e-10, vs matrix exponential %.2e<=1e-8, "
                     "lclt window err %.3f of budget 5/sqrt(lambda)",
                     row_dev, expm_dev, lclt_worst)};
}

// ------------------------------------------------------------- criterion 6
// Mesoscopic equation and hydrodynamics: the reservoir-free solver reduces
// to the kernel, the micro-macro gap shrinks with N, the Volterra solve is
// converged, and constant data is stationary when j = 0.

Criterion criterion_hydro() {
    auto u0 = [](double r) { return 0.5 + 0.3 * std::cos(3.141592653589793 * r); };

    // j = 0 reduction to the kernel
    double conv_dev = 0.0;
    {
        LatticeParams ps(40, 1, 0.0);
        std::vector<double> rho0(static_cast<std::size_t>(ps.n_sites()));
        for (int x = -ps.N; x <= ps.N; ++x)
            rho0[static_cast<std::size_t>(x + ps.N)] = u0(ps.epsilon() * x);
        auto rho = evolve_rho(ps, rho0, 0.37, 1e-10);
        for (int x = -ps.N; x <= ps.N; ++x) {
            double conv = 0.0;
            for (int y = -ps.N; y <= ps.N; ++y)
                conv += rho0[static_cast<std::size_t>(y + ps.N)] *
                        reflected_walk_kernel(ps, 0.37, x, y);
            conv_dev = std::max(conv_dev, std::fabs(conv - rho.at(x)));
        }
    }

    // micro-macro gap must drop markedly from N=100 to N=200
    const double T = 0.5;
    auto trace = solve_boundary_traces(u0, 1.0, 1, T, 1e-3);
    auto macro = solve_macro(u0, trace, T);
    double gaps[2] = {0.0, 0.0};
    int idx = 0;
    for (int N : {100, 200}) {
        LatticeParams ps(N, 1, 1.0);
        std::vector<double> rho0(static_cast<std::size_t>(ps.n_sites()));
        for (int x = -N; x <= N; ++x)
            rho0[static_cast<std::size_t>(x + N)] = u0(ps.epsilon() * x);
        auto rho = evolve_rho(ps, rho0, T, 1e-9);
        gaps[idx++] = micro_macro_gap(rho, macro);
    }

    // j = 0 with flat unit data: traces stay pinned at one
    double flat_dev = 0.0;
    {
        auto one = [](double) { return 1.0; };
        auto tr = solve_boundary_traces(one, 0.0, 1, 0.5, 1e-3);
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            flat_dev = std::max(flat_dev, std::fabs(tr.u_plus[i] - 1.0));
            flat_dev = std::max(flat_dev, std::fabs(tr.u_minus[i] - 1.0));
        }
    }

    bool ok = conv_dev <= 1e-7 && gaps[1] <= 0.7 * gaps[0] && trace.residual <= 1e-8 &&
              flat_dev <= 1e-9;
    return {ok, sfmt("j=0 vs kernel %.2e<=1e-7, gap N=200 %.2e vs 0.7x gap N=100 %.2e, "
                     "volterra residual %.1e<=1e-8, flat traces %.1e<=1e-9",
                     conv_dev, gaps[1], 0.7 * gaps[0], trace.residual, flat_dev)};
}

// ------------------------------------------------------------- criterion 7
// Kernel-iteration estimates: quadrature versus closed form, the Stirling
// bound, and the smoothing contraction.

Criterion criterion_estimates() {
    double rel_dev = 0.0;
    double bound_margin = 1.0;  // min over (n,t) of bound / a_n, must stay >= 1
    for (double t : {0.1, 1.0, 5.0, 10.0}) {
        for (int n = 0; n <= 30; ++n) {
            double cf = an_closed_form(n, t);
            if (n <= 10) {
                double q = iterated_kernel_an(n, t);
                rel_dev = std::max(rel_dev, std::fabs(q - cf) / cf);
            }
            if (n >= 1) bound_margin = std::min(bound_margin, an_upper_bound(n, t) / cf);
        }
    }

    double contraction_excess = 0.0;  // max over cases of smoothed/sup - 1
    {
        LatticeParams ps(60, 1, 0.0);
        Xoshiro256pp rng(0x7157u);
        std::vector<std::vector<double>> profiles;
        std::vector<double> f1(static_cast<std::size_t>(ps.n_sites()));
        for (auto& v : f1) v = 4.0 * rng.uniform() - 2.0;
        profiles.push_back(f1);
        std::vector<double> f2(static_cast<std::size_t>(ps.n_sites()));
        for (int x = -ps.N; x <= ps.N; ++x)
            f2[static_cast<std::size_t>(x + ps.N)] = std::sin(0.21 * x);
        profiles.push_back(f2);
        for (const auto& f : profiles) {
            double sup = 0.0;
            for (double v : f) sup = std::max(sup, std::fabs(v));
            for (double b : {0.3, 0.9}) {
                double sm = smoothed_norm(ps, f, b);
                contraction_excess = std::max(contraction_excess, sm / sup - 1.0);
            }
        }
    }

    bool ok = rel_dev <= 1e-8 && bound_margin >= 1.0 && contraction_excess <= 0.0;
    return {ok, sfmt("quadrature vs closed form %.2e<=1e-8 (n<=10), stirling bound margin "
                     "%.3f>=1 (n<=30), smoothing excess %.1e<=0",
                     rel_dev, bound_margin, contraction_excess)};
}

// ------------------------------------------------------------- criterion 8
// Determinism: the same seed with different thread counts must produce
// byte-identical result tables, both in memory and on disk.

std::string vfn_csv(int threads) {
    LatticeParams ps(3, 1, 1.0);
    SiteConfig eta0{1, 0, 1, 0, 1, 0, 1};
    VEstimate e = estimate_v(ps, {-1, 1}, 0.2, InitialCondition::deterministic(eta0), 20000,
                             0xD17E57u, threads);
    CsvBuilder b({"value", "std_error", "replicas", "batches"});
    b.reference_manifest("determinism_manifest.json");
    b.cell(e.value).cell(e.std_error).cell(static_cast<long>(e.replicas)).cell(
        static_cast<long>(e.batches));
    b.end_row();
    return b.str();
}

std::string pair_csv(int threads) {
    LatticeParams ps(50, 1, 0.0);
    auto stats = pair_stats(ps, 0, 1, 0.2, 5000, 0xD17E58u, threads);
    CsvBuilder b({"replica", "tau", "n_marks", "time_together"});
    b.reference_manifest("determinism_manifest.json");
    for (std::size_t i = 0; i < stats.size(); ++i) {
        double tau = std::isinf(stats[i].tau) ? -1.0 : stats[i].tau;
        b.cell(static_cast<long>(i)).cell(tau).cell(stats[i].n_marks).cell(
            stats[i].time_together);
        b.end_row();
    }
    return b.str();
}

std::string couple_csv(int threads) {
    LatticeParams ps(15, 1, 0.0);
    std::vector<int> x0{-5, 0, 5};
    std::vector<int> prio{1, 0, 2};
    auto runs = run_replicas<CouplingResult>(3000, threads, [&](long i) {
        return run_coupling(ps, x0, prio, 0.4, derive_seed(0xD17E59u, static_cast<std::uint64_t>(i)));
    });
    CsvBuilder b({"replica", "x0", "x1", "x2", "collisions", "suppressed"});
    b.reference_manifest("determinism_manifest.json");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        b.cell(static_cast<long>(i));
        for (int p = 0; p < 3; ++p)
            b.cell(static_cast<long>(runs[i].stirring[static_cast<std::size_t>(p)]));
        b.cell(runs[i].collision_marks).cell(runs[i].suppressed_jumps);
        b.end_row();
    }
    return b.str();
}

Criterion criterion_determinism() {
    bool ok = true;
    std::string note;
    auto dir = std::filesystem::temp_directory_path();
    int table = 0;
    for (auto* make : {&vfn_csv, &pair_csv, &couple_csv}) {
        std::string a = (*make)(1);
        std::string c = (*make)(4);
        auto pa = dir / sfmt("stir_accept_t1_%d.csv", table);
        auto pc = dir / sfmt("stir_accept_t4_%d.csv", table);
        write_file(pa.string(), a);
        write_file(pc.string(), c);
        bool same = (a == c) && (read_file(pa.string()) == read_file(pc.string()));
        if (!same) note += sfmt(" table %d differs;", table);
        ok = ok && same;
        ++table;
    }
    return {ok, sfmt("3 result tables, threads 1 vs 4: %s (fnv64 %016llx/%016llx/%016llx)%s",
                     ok ? "byte-identical" : "MISMATCH",
                     static_cast<unsigned long long>(fnv1a64(vfn_csv(1))),
                     static_cast<unsigned long long>(fnv1a64(pair_csv(1))),
                     static_cast<unsigned long long>(fnv1a64(couple_csv(1))), note.c_str())};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion (*fn)();
    };
    const Entry entries[] = {
        {"1 exact small systems", &criterion_exact},
        {"2 monte carlo vs master equation", &criterion_mc_oracle},
        {"3 pair survival and mark tail", &criterion_pair},
        {"4 priority coupling", &criterion_coupling},
        {"5 reflected kernel and local clt", &criterion_kernel},
        {"6 mesoscopic and hydrodynamic limit", &criterion_hydro},
        {"7 kernel iteration estimates", &criterion_estimates},
        {"8 determinism across thread counts", &criterion_determinism},
    };
    int failures = 0;
    std::printf("acceptance suite (fixed seeds, pinned tolerances)\n");
    for (const auto& e : entries) {
        Timer tm;
        Criterion c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c = {false, sfmt("exception: %s", ex.what())};
        }
        std::printf("[%s] %s: %s  [%.1f s]\n", c.ok ? "PASS" : "FAIL", e.name, c.detail.c_str(),
                    tm.seconds());
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
    return failures;
}
