#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "stir/lattice.hpp"
#include "stir/rng.hpp"

namespace stir {

using SiteConfig = std::vector<std::uint8_t>;

// ---------------------------------------------------------------- replicas

// Runs fn(replica_index) for indices [0, replicas) across the requested
// number of threads.  Results land in a vector slot keyed by index and any
// reduction happens afterwards in index order, so output is independent of
// the thread count and of scheduling.
template <class Result>
std::vector<Result> run_replicas(long replicas, int threads,
                                 const std::function<Result(long)>& fn) {
    std::vector<Result> out(static_cast<std::size_t>(replicas));
    if (threads <= 1) {
        for (long i = 0; i < replicas; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<long> cursor{0};
    auto worker = [&]() {
        for (;;) {
            long i = cursor.fetch_add(1);
            if (i >= replicas) return;
            out[static_cast<std::size_t>(i)] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

// ------------------------------------------------------------ full process

// Exclusion dynamics with boundary reservoirs.  Each bond of [-N, N] carries
// an exchange clock of rate eps^-2 / 2; one birth clock and one death clock
// run at rate eps^-1 j/2 each.  A birth fills the first empty site scanning
// down from N and aborts when the window I_plus is full; a death empties the
// first occupied site scanning up from -N and aborts when I_minus is empty.
struct FullProcessResult {
    SiteConfig final_config;
    std::vector<SiteConfig> samples;  // at the requested times, in order
    long exchanges = 0;
    long births = 0;
    long deaths = 0;
    long aborted_births = 0;
    long aborted_deaths = 0;
};
FullProcessResult run_full_process(const LatticeParams& params, const SiteConfig& eta0, double t,
                                   std::uint64_t seed,
                                   const std::vector<double>& sample_times = {});

// --------------------------------------------------- marks representation

// Poisson marks of rate eps^-2 on every bond of the enlarged set
// [-N-1, N] (left endpoints), each independently active or passive with
// probability 1/2.  Only active marks with both endpoints inside [-N, N]
// exchange occupancies; everything is recorded.
struct MarkEvent {
    double time = 0.0;
    int bond = 0;  // left endpoint, in [-N-1, N]
    bool active = false;
};
struct MarksResult {
    std::vector<int> positions;  // labeled particles at the horizon
    std::vector<MarkEvent> marks;
};
MarksResult run_marks_stirring(const LatticeParams& params, const std::vector<int>& x0, double t,
                               std::uint64_t seed);

// --------------------------------------------------------- labeled walks

// Thinned labeled stirring: only marks on bonds touching a particle are
// generated.  Bonds joining two particles run at the full mark rate eps^-2
// (active half swaps the labels); bonds with one particle run at the active
// rate eps^-2 / 2 and move it.  tau12 is the first mark of any attribute on
// the bond joining particles 0 and 1 while they sit on adjacent sites.
struct LabeledResult {
    std::vector<int> positions;
    double tau12 = std::numeric_limits<double>::infinity();
};
LabeledResult run_labeled_stirring(const LatticeParams& params, const std::vector<int>& x0,
                                   double t, Xoshiro256pp& rng);

// ------------------------------------------------------------- pair stats

struct PairStats {
    double tau = std::numeric_limits<double>::infinity();  // first inter-particle mark
    long n_marks = 0;                                      // such marks up to the horizon
    double time_together = 0.0;                            // adjacency occupation time
};
std::vector<PairStats> pair_stats(const LatticeParams& params, int x1, int x2, double t,
                                  long replicas, std::uint64_t seed, int threads = 1,
                                  bool survival_only = false);

// ---------------------------------------------------------------- duality

struct DualityMcReport {
    double forward_mean = 0.0;
    double dual_mean = 0.0;
    double z_score = 0.0;
    long replicas = 0;
};
// Forward: P[all of X occupied at t] under the stirring dynamics from eta0.
// Dual: particles started on X, evaluated against eta0 at time t.
DualityMcReport duality_check(const LatticeParams& params, const std::vector<int>& X,
                              const SiteConfig& eta0, double t, long replicas,
                              std::uint64_t seed, int threads = 1);

// ----------------------------------------------------------- antisymmetry

struct AntisymmetryReport {
    double mean = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    long replicas = 0;
};
// E[ 1{tau12 <= s} f(x(t)) ]; vanishes for f antisymmetric in particles 0,1.
AntisymmetryReport antisymmetry_check(const LatticeParams& params, const std::vector<int>& x0,
                                      double s, double t,
                                      const std::function<double(const std::vector<int>&)>& f,
                                      long replicas, std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------- coupling

// Joint evolution of the stirring particles x, their independent shadows
// x0 (walks with suppressed exits), and the pre-suppression positions y.
// Marks on bonds joining two stirring particles resolve by priority: the
// smaller sigma value wins the mark's jump, the larger one absorbs the
// recoil on the passive half.  Marks on the boundary bonds {-N-1,-N} and
// {N,N+1} push only the shadow of a wall-sitting particle outward.
struct CouplingOptions {
    bool record_jumps = false;   // collect per-particle shadow jump times
    bool track_identity = true;  // verify the top-priority particle never separates
};
struct CouplingResult {
    std::vector<int> stirring;
    std::vector<int> independent;
    std::vector<int> auxiliary;  // y after bounce-back, equals independent
    long collision_marks = 0;
    std::vector<long> collision_marks_per_particle;
    long suppressed_jumps = 0;
    bool top_priority_agreed = true;
    std::vector<std::vector<double>> jumps_right;  // per particle, if recorded
    std::vector<std::vector<double>> jumps_left;
};
CouplingResult run_coupling(const LatticeParams& params, const std::vector<int>& x0,
                            const std::vector<int>& priority, double t, std::uint64_t seed,
                            const CouplingOptions& opts = {});

}  // namespace stir
