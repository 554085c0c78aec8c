#pragma once

#include <cstdint>
#include <random>

namespace qint {

// All stochastic code draws from a per-run mt19937_64. The engine's output
// sequence is pinned by the C++ standard, and the samplers below are our own,
// so a seed reproduces the same counts on any platform and at any thread count.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

// Uniform in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Consumes no draw for p <= 0 or p >= 1.
inline bool bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform_unit(rng) < p;
}

// Exact Poisson sampler: multiplication method below mean 10, transformed
// rejection (Hormann's PTRS) above it.
std::uint64_t sample_poisson(Rng& rng, double mean);

// Exact binomial sampler counting successes via geometric gaps; cost grows
// with trials * min(p, 1-p).
std::uint64_t sample_binomial(Rng& rng, std::uint64_t trials, double p);

} // namespace qint
