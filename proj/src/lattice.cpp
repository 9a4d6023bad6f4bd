#include "stir/lattice.hpp"

namespace stir {

int reflection_map(const LatticeParams& params, long z) {
    const long L = params.period();
    long m = (z + params.N) % L;
    if (m < 0) m += L;
    if (m <= 2 * params.N) return static_cast<int>(m - params.N);
    return static_cast<int>(3L * params.N + 1 - m);
}

}  // namespace stir
