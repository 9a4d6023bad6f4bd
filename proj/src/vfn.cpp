#include "stir/vfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stir {

SiteConfig sample_initial(const LatticeParams& params, const InitialCondition& init,
                          Xoshiro256pp& rng) {
    if (!init.product) {
        if (static_cast<int>(init.config.size()) != params.n_sites())
            throw std::invalid_argument("sample_initial: configuration size must be 2N+1");
        return init.config;
    }
    SiteConfig eta(params.n_sites());
    for (int x = -params.N; x <= params.N; ++x) {
        double p = init.profile(params.epsilon() * x);
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("sample_initial: profile must map into [0,1]");
        eta[params.site_index(x)] = rng.uniform() < p ? 1 : 0;
    }
    return eta;
}

std::vector<double> initial_density(const LatticeParams& params, const InitialCondition& init) {
    std::vector<double> rho(params.n_sites());
    if (init.product) {
        for (int x = -params.N; x <= params.N; ++x)
            rho[params.site_index(x)] = init.profile(params.epsilon() * x);
    } else {
        if (static_cast<int>(init.config.size()) != params.n_sites())
            throw std::invalid_argument("initial_density: configuration size must be 2N+1");
        for (std::size_t i = 0; i < init.config.size(); ++i) rho[i] = init.config[i];
    }
    return rho;
}

VEstimate estimate_v(const LatticeParams& params, const std::vector<int>& X, double t,
                     const InitialCondition& init, long replicas, std::uint64_t seed,
                     int threads, double rho_tol) {
    if (replicas < 4) throw std::invalid_argument("estimate_v: replicas >= 4 required");
    {
        auto sorted = X;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("estimate_v: repeated sites in X");
        for (int x : X)
            if (!params.contains(x)) throw std::invalid_argument("estimate_v: site outside lattice");
    }

    RhoField rho = evolve_rho(params, initial_density(params, init), t, rho_tol);

    std::function<double(long)> one = [&](long rep) {
        Xoshiro256pp rng = replica_rng(seed, static_cast<std::uint64_t>(rep));
        SiteConfig eta0 = sample_initial(params, init, rng);
        auto run = run_full_process(params, eta0, t, rng(), {});
        double prod = 1.0;
        for (int x : X) prod *= run.final_config[params.site_index(x)] - rho.at(x);
        return prod;
    };
    auto vals = run_replicas<double>(replicas, threads, one);

    VEstimate est;
    est.replicas = replicas;
    double sum = 0.0;
    for (double v : vals) sum += v;
    est.value = sum / static_cast<double>(replicas);

    est.batches = static_cast<int>(std::min<long>(32, replicas / 2));
    const long per = replicas / est.batches;
    std::vector<double> means;
    means.reserve(est.batches);
    for (int b = 0; b < est.batches; ++b) {
        long lo = b * per;
        long hi = (b + 1 == est.batches) ? replicas : lo + per;
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += vals[static_cast<std::size_t>(i)];
        means.push_back(s / static_cast<double>(hi - lo));
    }
    double mbar = 0.0;
    for (double m : means) mbar += m;
    mbar /= est.batches;
    double ss = 0.0;
    for (double m : means) ss += (m - mbar) * (m - mbar);
    est.std_error = std::sqrt(ss / (est.batches - 1.0) / est.batches);
    return est;
}

BlockAverageReport block_average_test(const LatticeParams& params, const InitialCondition& init,
                                      double t, double a, double delta, long replicas,
                                      std::uint64_t seed, int threads) {
    if (a <= 0.0 || a >= 1.0)
        throw std::invalid_argument("block_average_test: a in (0,1) required");
    if (replicas < 1) throw std::invalid_argument("block_average_test: replicas >= 1 required");
    BlockAverageReport rep;
    rep.half_width = static_cast<int>(std::floor(std::pow(params.N, a)));
    rep.threshold = delta;
    rep.replicas = replicas;
    const int w = rep.half_width;
    if (2 * w + 1 > params.n_sites())
        throw std::invalid_argument("block_average_test: block wider than the lattice");

    RhoField rho = evolve_rho(params, initial_density(params, init), t, 1e-9);
    const int M = params.n_sites();

    std::function<char(long)> one = [&](long r) {
        Xoshiro256pp rng = replica_rng(seed, static_cast<std::uint64_t>(r));
        SiteConfig eta0 = sample_initial(params, init, rng);
        auto run = run_full_process(params, eta0, t, rng(), {});
        // prefix sums of the centred field
        std::vector<double> pre(M + 1, 0.0);
        for (int i = 0; i < M; ++i)
            pre[i + 1] = pre[i] + (run.final_config[i] - rho.values[i]);
        for (int c = w; c + w < M; ++c) {
            double block = (pre[c + w + 1] - pre[c - w]) / (2.0 * w + 1.0);
            if (std::fabs(block) >= delta) return char(1);
        }
        return char(0);
    };
    auto hits = run_replicas<char>(replicas, threads, one);
    rep.frequency =
        static_cast<double>(std::count(hits.begin(), hits.end(), char(1))) / replicas;
    return rep;
}

double initial_profile_check(const LatticeParams& params, const SiteConfig& eta0,
                             const std::function<double(double)>& u0, double a) {
    if (static_cast<int>(eta0.size()) != params.n_sites())
        throw std::invalid_argument("initial_profile_check: configuration size must be 2N+1");
    const int w = static_cast<int>(std::floor(std::pow(params.N, a)));
    const int M = params.n_sites();
    if (2 * w + 1 > M)
        throw std::invalid_argument("initial_profile_check: block wider than the lattice");
    std::vector<double> pre(M + 1, 0.0);
    for (int i = 0; i < M; ++i) pre[i + 1] = pre[i] + eta0[i];
    double sup = 0.0;
    for (int c = w; c + w < M; ++c) {
        double avg = (pre[c + w + 1] - pre[c - w]) / (2.0 * w + 1.0);
        double x = params.epsilon() * (c - params.N);
        sup = std::max(sup, std::fabs(avg - u0(x)));
    }
    return sup;
}

}  // namespace stir
