#include "qkd/random.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t substream)
    : engine_(splitmix64(splitmix64(seed) + substream)) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int RandomStream::poisson(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("poisson: mu must be >= 0");
    if (mu == 0.0) return 0;
    const double limit = std::exp(-mu);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > limit);
    return k - 1;
}

std::size_t sample_categorical(std::span<const double> weights, RandomStream& rng) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("sample_categorical: negative weight");
        sum += w;
    }
    if (sum > 1.0 + 1e-9) throw std::invalid_argument("sample_categorical: weights sum beyond 1");
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return i;
    }
    return weights.size();  // residual outcome
}

}  // namespace qkd
