#pragma once

#include <cmath>
#include <cstdint>

namespace stir {

// splitmix64: used only to expand a (seed, stream) pair into xoshiro state.
// Constants are the standard Weyl sequence / mixer values.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t s) : state(s) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ by Blackman/Vigna.  Fast, 256-bit state, passes BigCrush.
class Xoshiro256pp {
  public:
    Xoshiro256pp() : Xoshiro256pp(0x853c49e6748fea9bULL) {}

    explicit Xoshiro256pp(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    using result_type = uint64_t;
    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~0ULL; }

    uint64_t operator()() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // exponential with given rate; 1-u > 0 always since u < 1
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    bool coin() { return ((*this)() >> 63) != 0; }

    // unbiased integer in [0, n) (Lemire's multiply-shift with rejection)
    uint64_t below(uint64_t n) {
        uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        uint64_t l = static_cast<uint64_t>(m);
        if (l < n) {
            uint64_t floor = (-n) % n;
            while (l < floor) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * n;
                l = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Stream seed for replica r of a run seeded with `seed`, decorrelated by
// pushing (seed, r) through splitmix64 before state expansion.  Replica
// results then depend only on (seed, r), never on scheduling or threads.
inline uint64_t derive_seed(uint64_t seed, uint64_t replica) {
    SplitMix64 sm(seed ^ (0x9E3779B97F4A7C15ULL * (replica + 1)));
    uint64_t derived = sm.next();
    derived ^= sm.next() << 1;
    return derived;
}

inline Xoshiro256pp replica_rng(uint64_t seed, uint64_t replica) {
    return Xoshiro256pp(derive_seed(seed, replica));
}

}  // namespace stir
