#pragma once

#include "qkd/quantum.hpp"
#include "qkd/random.hpp"

// BB84 signal construction for two weak-coherent source models:
//
//   P - phase-coherent: every pulse carries the same known optical phase, so
//       the amplitude-level qutrit vector (truncated at one photon) is
//       physically meaningful and, in particular, available to an
//       eavesdropper;
//   R - phase-randomized: equivalent to a Poisson mixture of photon-number
//       states. It is modeled operationally by sampling a photon number and
//       using the single-photon polarization state; no amplitude-level state
//       is exposed for R on purpose, because only the number statistics are
//       physical.

namespace qkd {

enum class SourceKind : std::uint8_t { R, P };
enum class Basis : std::uint8_t { Z, X };

struct SourceConfig {
    SourceKind kind = SourceKind::R;
    double mu = 0.1;     // mean photon number
    double theta = 0.0;  // overall signal phase (kind P); rotates the one-photon sector
    double phi = 0.0;    // plane phase of the X basis states

    void validate() const;  // throws std::invalid_argument on bad parameters
};

struct PhotonStats {
    double p0;  // vacuum
    double p1;  // exactly one photon
    double pM;  // two or more photons
};

// p0 = e^-mu, p1 = mu e^-mu, pM = 1 - e^-mu (1 + mu). pM <= mu^2 / 2.
PhotonStats photon_statistics(double mu);

// n ~ Poisson(mu), drawn from the caller's stream.
int sample_photon_number(double mu, RandomStream& rng);

// Single-photon polarization states on the {Ph0, Ph1} qubit:
//   Z basis: |0>, |1>
//   X basis: (e^{i phi} |0> +- e^{-i phi} |1>) / sqrt(2), + for bit 0.
StateVector single_photon_state(int bit, Basis basis, double phi);

// Qutrit signal of source P with theta = 0:
//   e^{-mu/2} (1, alpha c0, alpha c1),  alpha = sqrt(mu),
// where (c0, c1) = single_photon_state(bit, basis, phi). The squared norm is
// e^-mu (1 + mu); the deficit equals photon_statistics(mu).pM and stands for
// the truncated multiphoton component.
StateVector bb84_signal_p(int bit, Basis basis, double mu, double phi);

// General form with alpha = sqrt(mu) e^{i theta}. cfg.kind must be P.
StateVector bb84_signal_p(int bit, Basis basis, const SourceConfig& cfg);

}  // namespace qkd
