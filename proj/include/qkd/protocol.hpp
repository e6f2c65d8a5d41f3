#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qkd/source.hpp"

// Monte Carlo engine for full BB84 runs: Alice's random choices, source
// emission, an optional eavesdropper (none, or the unambiguous-discrimination
// intercept/resend attack with multiphoton rejection), channel loss, Bob's
// basis choice and measurement, sifting, and error/knowledge accounting.
//
// Determinism contract: results depend only on (config, seed), never on the
// worker count or thread scheduling. Signals are processed in fixed chunks of
// 2^16; chunk k always draws from RandomStream(seed, k), and workers merge
// integer counters, which is order-independent.

namespace qkd {

enum class AttackKind : std::uint8_t { None, Ukd };

struct RunConfig {
    std::uint64_t n_signals = 100000;
    SourceConfig source{};
    AttackKind attack = AttackKind::None;
    double channel_transmittance = 1.0;  // honest-channel loss; used only when attack = None
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;  // throws std::invalid_argument
};

// One emitted signal, as seen by the simulation. bob_basis / bob_bit are
// meaningful only when detected is true; eve_bit is -1 unless Eve recorded a
// conclusive outcome.
struct RawEvent {
    Basis alice_basis;
    int alice_bit;
    bool detected;
    Basis bob_basis;
    int bob_bit;
    int eve_bit;
};

struct SiftedPair {
    int alice_bit;
    int bob_bit;
};

struct ProtocolStats {
    std::uint64_t sent = 0;
    std::uint64_t detected = 0;
    std::uint64_t sifted = 0;
    std::uint64_t errors = 0;
    // Per-key-bit breakdown of emissions and detections.
    std::uint64_t sent_bit0 = 0;
    std::uint64_t sent_bit1 = 0;
    std::uint64_t detected_bit0 = 0;
    std::uint64_t detected_bit1 = 0;
    // Sifted positions where Eve's record equals Alice's bit.
    std::uint64_t eve_sifted_matches = 0;

    double detection_rate = 0.0;   // detected / sent
    double error_rate_hat = 0.0;   // errors / sifted (0 when nothing was sifted)
    // Fraction of sifted key bits Eve knows; present only for attack = Ukd
    // (1.0 when the sifted key is empty, vacuously).
    std::optional<double> eve_agreement;
};

// True when all integer counters agree (rates are derived from them).
bool same_counts(const ProtocolStats& a, const ProtocolStats& b);

// Runs the protocol with config.workers threads. Per signal: Alice draws
// basis and bit equiprobably.
//   attack = Ukd (requires source kind P): the four-way outcome {bit0, bit1,
//   inconclusive, multiphoton} is drawn with Eve's exact outcome
//   probabilities; on a conclusive outcome Eve records the bit and forwards
//   resend_state(bit), which Bob (random basis) always detects; inconclusive
//   and multiphoton signals are blocked, so Bob sees nothing.
//   attack = None: a photon number is drawn, each photon independently
//   survives with probability channel_transmittance, any survivor triggers a
//   detection, and Bob's outcome follows the single-photon statistics of the
//   sent polarization in his basis. Detector loss, if any, is folded into the
//   transmittance before the basis choice (basis-independent efficiency).
ProtocolStats run_protocol(const RunConfig& config);

// Sequential variant that additionally streams every raw event to the
// observer, in signal order. Totals are identical to the parallel variant by
// construction. Intended for tests and diagnostics on small runs.
ProtocolStats run_protocol(const RunConfig& config,
                           const std::function<void(const RawEvent&)>& observer);

// Keeps detected events whose bases match.
std::vector<SiftedPair> sift(std::span<const RawEvent> events);

struct ErrorEstimate {
    double error_rate_hat;
    double standard_error;  // binomial: sqrt(p (1-p) / n)
};

// Error rate of a sifted key with its binomial standard error. Throws on an
// empty list.
ErrorEstimate estimate_error_rate(std::span<const SiftedPair> sifted);

}  // namespace qkd
