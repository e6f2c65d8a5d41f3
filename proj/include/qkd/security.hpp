#pragma once

#include <cstdint>

// Security analysis for the phase-randomized source: multiphoton fraction of
// the detected signals, phase-error-rate bound, threshold verdicts, and the
// largest mean photon number the bounds certify at a given observed error
// rate. All functions are pure.

namespace qkd {

// Error-rate thresholds below which the known one-way / two-way
// post-processing security proofs apply.
inline constexpr double kOneWayThreshold = 0.110;
inline constexpr double kTwoWayThreshold = 0.189;

// Slack used when comparing an observed error rate against the
// intercept-resend rate 0.1464466...; wide enough to absorb operating points
// quoted to three decimals (e.g. 0.146).
inline constexpr double kAttackRateTolerance = 5e-4;

enum class VerdictR : std::uint8_t { Secure, NotProven };  // phase-randomized source
enum class VerdictP : std::uint8_t { Broken, Unknown };    // phase-coherent source

struct SecurityReport {
    double mu;
    double delta;           // observed bit error rate
    double p_d;             // detection rate per emitted signal
    double p_m;             // multiphoton emission probability (bound mu^2/2)
    double big_delta;       // multiphoton fraction of detected signals, p_m / p_d
    double delta_p_bound;   // phase error rate bound: delta + big_delta / 2
    double threshold_one_way = kOneWayThreshold;
    double threshold_two_way = kTwoWayThreshold;
    VerdictR verdict_r;
    VerdictP verdict_p;
    double mu_star;         // largest provably-secure mu at this delta (0 if none)
    // Modeling assumption recorded with every report: detector efficiency is
    // taken to be independent of the measured basis. Not simulated.
    bool basis_independent_detection = true;
};

// mu^2 / 2, the closed-form bound on the multiphoton emission probability.
double multiphoton_bound(double mu);

// p_m / p_d. Throws if p_d is not in (0, 1], p_m not in [0, 1], or the ratio
// exceeds 1 (more multiphotons than detections is inconsistent input).
double multiphoton_fraction(double p_m, double p_d);

// delta + big_delta / 2, the worst case of |delta_p - delta| < big_delta / 2.
// Inputs must be in [0, 1].
double phase_error_bound(double delta, double big_delta);

// multiphoton_bound(mu) / detection_rate_bound(mu): the multiphoton fraction
// when the detection rate is pinned to the conservative attack bound.
// Strictly increasing in mu.
double big_delta_bound(double mu);

// Fills a full SecurityReport from an observed error rate, the mean photon
// number, and a detection rate (simulated or analytic).
//   verdict_r = Secure iff delta and delta + big_delta/2 are both strictly
//               below the two-way threshold 0.189;
//   verdict_p = Broken iff delta >= induced_error_rate() - kAttackRateTolerance,
//               since the discrimination attack achieves exactly that error
//               rate while giving Eve every sifted key bit.
// big_delta is reported unclamped; values above 1 mean the bound is vacuous
// (such a report is never Secure).
SecurityReport secure_verdict(double delta, double mu, double p_d);

// Solves big_delta_bound(mu) = 2 (0.189 - delta) for mu by bisection with
// absolute tolerance 1e-6. Returns 0 when delta >= 0.189 (no positive
// solution). Throws for delta outside [0, 1).
double max_secure_mu(double delta);

}  // namespace qkd
