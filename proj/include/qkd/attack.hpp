#pragma once

#include <utility>

#include "qkd/quantum.hpp"
#include "qkd/source.hpp"

// Eve's unambiguous key discrimination measurement against source P, her
// resend strategy, and the probabilities these induce.
//
// The two signals that carry key bit b span a two-dimensional subspace of the
// qutrit space, so there is (up to phase) one unit vector perpendicular to
// that span. Projecting onto it witnesses "the key bit is not b" with
// certainty. The two witness projectors, each taken with weight 1/2, are the
// conclusive POVM elements; the remainder is the inconclusive (Dk) element.
// Weight 1/2 keeps every element positive for all mu and phi.

namespace qkd {

struct UkdPovm {
    HermitianOperator e0;   // conclusive outcome: key bit is 0
    HermitianOperator e1;   // conclusive outcome: key bit is 1
    HermitianOperator edk;  // inconclusive
    StateVector v0perp;     // unit vector orthogonal to both bit-0 signals
    StateVector v1perp;     // unit vector orthogonal to both bit-1 signals
    // Closed-form normalization constants of the unnormalized fixed-plane
    // (phi = 0) perpendicular vectors:
    //   n_b = [(2 + sqrt 2)(1 + (1/2 +- 1/(2 sqrt 2)) mu)]^{-1/2},
    // with + for n0 and - for n1.
    double n0;
    double n1;

    // The three elements as a validated Povm (Bit0, Bit1, Dk).
    Povm as_povm() const;
};

// Unit vectors perpendicular to the span of the two bit-0 signals and to the
// span of the two bit-1 signals. Computed for general phi from the null space
// of the 2x3 matrix of signal rows (orthogonal complement of the two
// Gram-Schmidt-orthonormalized rows), not from a symbolic formula. The global
// phase is fixed by making the largest-magnitude component real and positive.
// Throws for mu = 0, where all signals collapse to vacuum and the span
// degenerates.
std::pair<StateVector, StateVector> perp_vectors(double mu, double phi);
std::pair<StateVector, StateVector> perp_vectors(const SourceConfig& cfg);

// E0 = 1/2 |v1perp><v1perp|, E1 = 1/2 |v0perp><v0perp|, Edk = I - E0 - E1.
// All POVM invariants are verified at construction.
UkdPovm build_ukd_povm(double mu, double phi);
UkdPovm build_ukd_povm(const SourceConfig& cfg);

// Probability of a conclusive outcome on a bit-b signal at phi = 0:
//   (1/2 - 1/(2 sqrt 2)) mu e^-mu [1 + (1/2 -+ 1/(2 sqrt 2)) mu]^{-1},
// with - in the denominator for bit 0 and + for bit 1, so the bit-0 value is
// the larger of the two. Equals the operator-route expectation of E_b on the
// bit-b signal in either basis (checked to 1e-12 in the tests).
double conclusive_probability(int bit, double mu);

// min over bits of conclusive_probability (the bit-1 value):
//   (1/2 - 1/(2 sqrt 2)) mu e^-mu [1 + (1/2 + 1/(2 sqrt 2)) mu]^{-1}.
// Lower bound on the per-signal rate at which Eve can resend; this is the
// detection rate the security analysis conservatively plugs in for source P.
double detection_rate_bound(double mu);

// Eve's resend for conclusive bit b: the phase-aligned uniform superposition
// of the two compatible single-photon signals,
//   s ~ |z_b> + e^{-i arg<z_b|x_b>} |x_b>,
// normalized, global phase fixed as in perp_vectors. The alignment factor
// makes the superposition genuinely uniform (|<z_b|s>| = |<x_b|s>|) for every
// phi and both bits; at phi = 0 it reduces to z + x for bit 0 and z - x for
// bit 1. A genuine single photon is resent, so Bob always detects it.
StateVector resend_state(int bit, double phi);

// Bit error rate the resend strategy induces on sifted positions:
//   1/2 - 1/(2 sqrt 2) = 0.1464466...
// independent of basis, bit value, and phi.
double induced_error_rate();

}  // namespace qkd
