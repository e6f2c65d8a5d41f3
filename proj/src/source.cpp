#include "qkd/source.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

namespace {

const double kInvRoot2 = 1.0 / std::sqrt(2.0);

void check_bit(int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
}

}  // namespace

void SourceConfig::validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("SourceConfig: mu must be finite and >= 0");
    }
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("SourceConfig: phases must be finite");
    }
}

PhotonStats photon_statistics(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("photon_statistics: mu must be >= 0");
    const double p0 = std::exp(-mu);
    const double p1 = mu * p0;
    // 1 - e^-mu (1 + mu), written to avoid cancellation at small mu.
    double pm = -std::expm1(-mu) - p1;
    if (pm < 0.0) pm = 0.0;
    return {p0, p1, pm};
}

int sample_photon_number(double mu, RandomStream& rng) {
    if (!(mu >= 0.0)) throw std::invalid_argument("sample_photon_number: mu must be >= 0");
    return rng.poisson(mu);
}

StateVector single_photon_state(int bit, Basis basis, double phi) {
    check_bit(bit);
    if (basis == Basis::Z) {
        return bit == 0 ? StateVector::qubit(1.0, 0.0) : StateVector::qubit(0.0, 1.0);
    }
    const complexd up = std::polar(kInvRoot2, phi);
    const complexd down = std::polar(kInvRoot2, -phi);
    return bit == 0 ? StateVector::qubit(up, down) : StateVector::qubit(up, -down);
}

StateVector bb84_signal_p(int bit, Basis basis, double mu, double phi) {
    return bb84_signal_p(bit, basis, SourceConfig{SourceKind::P, mu, 0.0, phi});
}

StateVector bb84_signal_p(int bit, Basis basis, const SourceConfig& cfg) {
    cfg.validate();
    if (cfg.kind != SourceKind::P) {
        throw std::invalid_argument(
            "bb84_signal_p: amplitude-level signals exist only for the phase-coherent source (kind P)");
    }
    check_bit(bit);
    const StateVector c = single_photon_state(bit, basis, cfg.phi);
    const double pref = std::exp(-cfg.mu / 2.0);
    const complexd alpha = std::polar(std::sqrt(cfg.mu), cfg.theta);
    return StateVector::qutrit(pref, pref * alpha * c.amplitudes[0], pref * alpha * c.amplitudes[1]);
}

}  // namespace qkd
