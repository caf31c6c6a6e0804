#pragma once

#include "dimerlab/kasteleyn.hpp"
#include "dimerlab/lattice.hpp"

#include <array>
#include <cstdint>

namespace dimerlab {

struct SamplerConfig {
    enum class Method { Exact, Glauber };
    uint64_t seed = 0;
    Method method = Method::Exact;
    int glauber_sweeps = 1;
};

// One exactly-uniform sample by sequential determinantal conditioning:
// whites are visited in index order; the conditional law of the current
// white's partner comes from the Schur-complement-updated inverse.
// Deterministic given (seed, draw_index).
Matching sample_exact(const KasteleynSystem& system, uint64_t seed, uint64_t draw_index = 0);

// Independent draws; deterministic given seed regardless of thread count.
std::vector<Matching> sample_exact_many(const KasteleynSystem& system, int count, uint64_t seed,
                                        int threads = 1);

// Some perfect matching, greedy start plus augmenting paths.
Matching initial_matching(const Region& region);

// Single-face rotation dynamics: `sweeps` passes of (#interior faces)
// uniformly random face proposals, each accepted with probability 1/2.
Matching sample_glauber(const Region& region, uint64_t seed, int sweeps);

// Fractions of type-1/2/3 dimers among matched edges interior to the window,
// pooled over samples.
std::array<double, 3> empirical_lozenge_densities(const std::vector<Matching>& samples,
                                                  const std::vector<FaceId>& window);

} // namespace dimerlab
