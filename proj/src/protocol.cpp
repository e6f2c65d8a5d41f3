#include "qkd/protocol.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qkd/attack.hpp"
#include "qkd/random.hpp"

namespace qkd {

namespace {

constexpr std::uint64_t kChunkSignals = std::uint64_t{1} << 16;

// Exact per-signal outcome probabilities, precomputed once per run.
struct Tables {
    // ukd_weights[basis][alice_bit] = {P(Eve concludes 0), P(Eve concludes 1),
    // P(inconclusive)}; the categorical residual (index 3) is the discarded
    // multiphoton branch.
    std::array<std::array<std::array<double, 3>, 2>, 2> ukd_weights{};
    // P(Bob reads 0 | Eve resent bit r, Bob basis).
    std::array<std::array<double, 2>, 2> resend_p0{};
    // P(Bob reads 0 | Alice basis, Alice bit, Bob basis), honest channel.
    std::array<std::array<std::array<double, 2>, 2>, 2> honest_p0{};
};

Tables make_tables(const RunConfig& cfg) {
    Tables t;
    const double phi = cfg.source.phi;
    if (cfg.attack == AttackKind::Ukd) {
        const UkdPovm povm = build_ukd_povm(cfg.source);
        for (int b = 0; b < 2; ++b) {
            const Basis basis = b == 0 ? Basis::Z : Basis::X;
            for (int bit = 0; bit < 2; ++bit) {
                const StateVector psi = bb84_signal_p(bit, basis, cfg.source);
                const double w0 = 0.5 * std::norm(inner_product(povm.v1perp, psi));
                const double w1 = 0.5 * std::norm(inner_product(povm.v0perp, psi));
                const double wdk = std::max(0.0, psi.squared_norm() - w0 - w1);
                t.ukd_weights[b][bit] = {w0, w1, wdk};
            }
        }
        for (int r = 0; r < 2; ++r) {
            const StateVector s = resend_state(r, phi);
            for (int b = 0; b < 2; ++b) {
                const Basis basis = b == 0 ? Basis::Z : Basis::X;
                t.resend_p0[r][b] = std::norm(inner_product(single_photon_state(0, basis, phi), s));
            }
        }
    } else {
        for (int ab = 0; ab < 2; ++ab) {
            const Basis abasis = ab == 0 ? Basis::Z : Basis::X;
            for (int bit = 0; bit < 2; ++bit) {
                const StateVector sent = single_photon_state(bit, abasis, phi);
                for (int bb = 0; bb < 2; ++bb) {
                    const Basis bbasis = bb == 0 ? Basis::Z : Basis::X;
                    t.honest_p0[ab][bit][bb] =
                        std::norm(inner_product(single_photon_state(0, bbasis, phi), sent));
                }
            }
        }
    }
    return t;
}

struct Counters {
    std::uint64_t sent = 0, detected = 0, sifted = 0, errors = 0;
    std::array<std::uint64_t, 2> sent_bit{};
    std::array<std::uint64_t, 2> det_bit{};
    std::uint64_t eve_matches = 0;

    Counters& operator+=(const Counters& o) {
        sent += o.sent;
        detected += o.detected;
        sifted += o.sifted;
        errors += o.errors;
        sent_bit[0] += o.sent_bit[0];
        sent_bit[1] += o.sent_bit[1];
        det_bit[0] += o.det_bit[0];
        det_bit[1] += o.det_bit[1];
        eve_matches += o.eve_matches;
        return *this;
    }
};

// Processes signals [chunk * 2^16, min(n, (chunk+1) * 2^16)) with the chunk's
// own substream, so totals never depend on which thread ran which chunk.
// Per-signal draw order is fixed: Alice basis, Alice bit, channel/attack
// draws, then Bob basis and outcome when a detection happens.
Counters run_chunk(const RunConfig& cfg, const Tables& t, std::uint64_t chunk,
                   const std::function<void(const RawEvent&)>* observer) {
    RandomStream rng(cfg.seed, chunk);
    const std::uint64_t begin = chunk * kChunkSignals;
    const std::uint64_t end = std::min(cfg.n_signals, begin + kChunkSignals);
    Counters c;
    for (std::uint64_t i = begin; i < end; ++i) {
        const Basis abasis = rng.uniform() < 0.5 ? Basis::Z : Basis::X;
        const int abit = rng.uniform() < 0.5 ? 0 : 1;
        ++c.sent;
        ++c.sent_bit[abit];
        RawEvent ev{abasis, abit, false, Basis::Z, 0, -1};

        if (cfg.attack == AttackKind::Ukd) {
            const auto& w = t.ukd_weights[abasis == Basis::Z ? 0 : 1][abit];
            const std::size_t outcome = sample_categorical({w.data(), w.size()}, rng);
            if (outcome <= 1) {  // conclusive: Eve knows the bit and resends
                ev.eve_bit = static_cast<int>(outcome);
                ev.bob_basis = rng.uniform() < 0.5 ? Basis::Z : Basis::X;
                const double p0 = t.resend_p0[ev.eve_bit][ev.bob_basis == Basis::Z ? 0 : 1];
                ev.bob_bit = rng.uniform() < p0 ? 0 : 1;
                ev.detected = true;
            }  // inconclusive and multiphoton signals are blocked
        } else {
            const int n = rng.poisson(cfg.source.mu);
            int survivors = 0;
            for (int j = 0; j < n; ++j) {
                if (rng.uniform() < cfg.channel_transmittance) ++survivors;
            }
            if (survivors > 0) {
                ev.bob_basis = rng.uniform() < 0.5 ? Basis::Z : Basis::X;
                const double p0 = t.honest_p0[abasis == Basis::Z ? 0 : 1][abit]
                                             [ev.bob_basis == Basis::Z ? 0 : 1];
                ev.bob_bit = rng.uniform() < p0 ? 0 : 1;
                ev.detected = true;
            }
        }

        if (ev.detected) {
            ++c.detected;
            ++c.det_bit[abit];
            if (ev.bob_basis == abasis) {
                ++c.sifted;
                if (ev.bob_bit != abit) ++c.errors;
                if (ev.eve_bit == abit) ++c.eve_matches;
            }
        }
        if (observer) (*observer)(ev);
    }
    return c;
}

ProtocolStats finalize(const RunConfig& cfg, const Counters& c) {
    ProtocolStats s;
    s.sent = c.sent;
    s.detected = c.detected;
    s.sifted = c.sifted;
    s.errors = c.errors;
    s.sent_bit0 = c.sent_bit[0];
    s.sent_bit1 = c.sent_bit[1];
    s.detected_bit0 = c.det_bit[0];
    s.detected_bit1 = c.det_bit[1];
    s.eve_sifted_matches = c.eve_matches;
    s.detection_rate = static_cast<double>(c.detected) / static_cast<double>(c.sent);
    s.error_rate_hat =
        c.sifted > 0 ? static_cast<double>(c.errors) / static_cast<double>(c.sifted) : 0.0;
    if (cfg.attack == AttackKind::Ukd) {
        s.eve_agreement = c.sifted > 0
                              ? static_cast<double>(c.eve_matches) / static_cast<double>(c.sifted)
                              : 1.0;
    }
    return s;
}

}  // namespace

void RunConfig::validate() const {
    source.validate();
    if (n_signals < 1) throw std::invalid_argument("RunConfig: n_signals must be >= 1");
    if (!(channel_transmittance > 0.0 && channel_transmittance <= 1.0)) {
        throw std::invalid_argument("RunConfig: channel_transmittance must be in (0, 1]");
    }
    if (workers < 1) throw std::invalid_argument("RunConfig: workers must be >= 1");
    if (attack == AttackKind::Ukd) {
        if (source.kind != SourceKind::P) {
            throw std::invalid_argument(
                "RunConfig: the discrimination attack needs the phase-coherent source (kind P)");
        }
        if (!(source.mu > 0.0)) {
            throw std::invalid_argument("RunConfig: the discrimination attack needs mu > 0");
        }
    }
}

bool same_counts(const ProtocolStats& a, const ProtocolStats& b) {
    return a.sent == b.sent && a.detected == b.detected && a.sifted == b.sifted &&
           a.errors == b.errors && a.sent_bit0 == b.sent_bit0 && a.sent_bit1 == b.sent_bit1 &&
           a.detected_bit0 == b.detected_bit0 && a.detected_bit1 == b.detected_bit1 &&
           a.eve_sifted_matches == b.eve_sifted_matches;
}

ProtocolStats run_protocol(const RunConfig& config) {
    config.validate();
    const Tables tables = make_tables(config);
    const std::uint64_t n_chunks = (config.n_signals + kChunkSignals - 1) / kChunkSignals;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(config.workers, n_chunks));

    std::vector<Counters> parts(workers);
    std::atomic<std::uint64_t> next{0};
    auto work = [&](unsigned slot) {
        Counters local;
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= n_chunks) break;
            local += run_chunk(config, tables, chunk, nullptr);
        }
        parts[slot] = local;
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers - 1);
        for (unsigned slot = 1; slot < workers; ++slot) threads.emplace_back(work, slot);
        work(0);
        for (std::thread& th : threads) th.join();
    }

    Counters total;
    for (const Counters& p : parts) total += p;
    return finalize(config, total);
}

ProtocolStats run_protocol(const RunConfig& config,
                           const std::function<void(const RawEvent&)>& observer) {
    config.validate();
    const Tables tables = make_tables(config);
    const std::uint64_t n_chunks = (config.n_signals + kChunkSignals - 1) / kChunkSignals;
    Counters total;
    for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
        total += run_chunk(config, tables, chunk, &observer);
    }
    return finalize(config, total);
}

std::vector<SiftedPair> sift(std::span<const RawEvent> events) {
    std::vector<SiftedPair> kept;
    for (const RawEvent& ev : events) {
        if (ev.detected && ev.alice_basis == ev.bob_basis) {
            kept.push_back({ev.alice_bit, ev.bob_bit});
        }
    }
    return kept;
}

ErrorEstimate estimate_error_rate(std::span<const SiftedPair> sifted) {
    if (sifted.empty()) throw std::invalid_argument("estimate_error_rate: empty sifted list");
    std::uint64_t errors = 0;
    for (const SiftedPair& p : sifted) {
        if (p.alice_bit != p.bob_bit) ++errors;
    }
    const double n = static_cast<double>(sifted.size());
    const double p = static_cast<double>(errors) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace qkd
