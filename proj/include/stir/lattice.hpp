#pragma once

#include <stdexcept>

namespace stir {

enum class Side { minus, plus };

// Finite lattice [-N, N] with reservoir windows of width K at both ends and
// boundary injection/extraction strength j.  The scaling parameter is
// epsilon = 1/N: exchange events run at rate eps^-2 per unit macroscopic
// time, boundary events at rate eps^-1 * j/2.
struct LatticeParams {
    int N = 1;
    int K = 1;
    double j = 0.0;

    LatticeParams() = default;
    LatticeParams(int N_, int K_, double j_) : N(N_), K(K_), j(j_) { validate(); }

    void validate() const {
        if (N < 1) throw std::invalid_argument("LatticeParams: N >= 1 required");
        if (K < 1 || K > 2 * N + 1)
            throw std::invalid_argument("LatticeParams: K in [1, 2N+1] required");
        if (j < 0.0) throw std::invalid_argument("LatticeParams: j >= 0 required");
    }

    double epsilon() const { return 1.0 / N; }
    int n_sites() const { return 2 * N + 1; }
    // unfolding period of the reflected walk
    int period() const { return 2 * (2 * N + 1); }

    bool contains(int z) const { return z >= -N && z <= N; }
    int site_index(int x) const { return x + N; }

    bool in_reservoir(int x, Side side) const {
        if (!contains(x)) return false;
        return side == Side::plus ? x >= N - K + 1 : x <= -N + K - 1;
    }
    bool in_either_reservoir(int x) const {
        return in_reservoir(x, Side::plus) || in_reservoir(x, Side::minus);
    }
};

// Folds an unrestricted walker position onto [-N, N] by repeated reflection
// at the walls; positions z and 2N+1-z (mod the period 4N+2) land on the
// same site.  This is the unfolding map behind the image-sum kernel.
int reflection_map(const LatticeParams& params, long z);

}  // namespace stir
