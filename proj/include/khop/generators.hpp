#pragma once

#include <cstddef>

#include "khop/network.hpp"
#include "khop/rng.hpp"

namespace khop {

// Synthetic networks for experiments and tests. Node labels are "0".."n-1";
// every edge gets probability p and every node acceptance probability
// theta.

/// G(n, m): m distinct edges drawn uniformly.
Graph erdos_renyi_gnm(std::size_t n, std::size_t m, double p, double theta, Rng& rng);

/// Preferential attachment; node t >= m0 attaches to `attach` existing nodes
/// (alternating attach and attach+1 when `half_step` is set, which gives an
/// average degree near 2*attach+1).
Graph preferential_attachment(std::size_t n, std::size_t attach, bool half_step, double p,
                              double theta, Rng& rng);

/// Ring lattice where each node links to its `ring_degree`/2 nearest
/// neighbors on each side, plus `extra` random chords.
Graph ring_with_chords(std::size_t n, std::size_t ring_degree, std::size_t extra, double p,
                       double theta, Rng& rng);

}  // namespace khop
