#pragma once

#include <cstdint>
#include <random>
#include <span>

// Seeded random streams with an explicit substream index so parallel Monte
// Carlo work can be split deterministically: substream k of a given seed
// always yields the same draws no matter which thread consumes it.

namespace qkd {

// Bijective 64-bit mixing finalizer (splitmix64). Used to decorrelate
// user seeds and substream indices before seeding the engine.
std::uint64_t splitmix64(std::uint64_t x);

class RandomStream {
public:
    // The engine is seeded with splitmix64(splitmix64(seed) + substream),
    // so for a fixed seed every substream gets a distinct engine seed.
    explicit RandomStream(std::uint64_t seed, std::uint64_t substream = 0);

    std::uint64_t next_u64();

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

    // Exact Poisson sampling via the product method; cost grows linearly
    // with mu, which is fine at the mean photon numbers used here.
    int poisson(double mu);

private:
    std::mt19937_64 engine_;
};

// Draws an index distributed per `weights`. If the weights sum to s < 1, the
// extra index weights.size() is returned with probability 1 - s (residual
// outcome, interpreted by the caller, e.g. as the multiphoton branch).
// Throws on a negative weight or if the sum exceeds 1 + 1e-9.
std::size_t sample_categorical(std::span<const double> weights, RandomStream& rng);

}  // namespace qkd
