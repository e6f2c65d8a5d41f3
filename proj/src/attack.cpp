#include "qkd/attack.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qkd {

namespace {

const double kRoot2 = std::sqrt(2.0);
// Overlap constants of the two signal pairs: |<z|x>| = 1/sqrt(2) for the
// single-photon states, which puts (1 +- 1/sqrt(2))/2 = 1/2 +- 1/(2 sqrt 2)
// into every closed form below.
const double kCMinus = 0.5 - 1.0 / (2.0 * kRoot2);
const double kCPlus = 0.5 + 1.0 / (2.0 * kRoot2);

using Vec3 = std::array<complexd, 3>;

Vec3 to_vec(const StateVector& s) { return {s.amplitudes[0], s.amplitudes[1], s.amplitudes[2]}; }

complexd dot(const Vec3& a, const Vec3& b) {  // <a|b>
    complexd s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(const Vec3& a) { return std::sqrt(std::real(dot(a, a))); }

void axpy(Vec3& y, const complexd& f, const Vec3& x) {
    for (int i = 0; i < 3; ++i) y[i] += f * x[i];
}

void scale(Vec3& v, const complexd& f) {
    for (int i = 0; i < 3; ++i) v[i] *= f;
}

// Deterministic global phase: make the largest-magnitude component real and
// positive (lowest index on ties).
void fix_phase(Vec3& v) {
    int idx = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(v[i]) > std::abs(v[idx])) idx = i;
    }
    const double mag = std::abs(v[idx]);
    scale(v, std::conj(v[idx]) / mag);
}

// Unit vector orthogonal to span{s1, s2}: Gram-Schmidt the two rows, then
// take the orthogonal complement of the best-conditioned seed basis vector.
Vec3 null_vector(const Vec3& s1, const Vec3& s2) {
    Vec3 r1 = s1;
    const double n1 = norm(r1);
    if (n1 < 1e-12) throw std::invalid_argument("perp_vectors: degenerate signal set");
    scale(r1, 1.0 / n1);

    Vec3 r2 = s2;
    axpy(r2, -dot(r1, r2), r1);
    const double n2 = norm(r2);
    if (n2 < 1e-12) {
        throw std::invalid_argument("perp_vectors: signals span less than two dimensions (mu = 0?)");
    }
    scale(r2, 1.0 / n2);

    Vec3 best{};
    double best_norm = -1.0;
    for (int k = 0; k < 3; ++k) {
        Vec3 w{};
        w[k] = 1.0;
        axpy(w, -dot(r1, w), r1);
        axpy(w, -dot(r2, w), r2);
        const double wn = norm(w);
        if (wn > best_norm) {
            best_norm = wn;
            best = w;
        }
    }
    scale(best, 1.0 / best_norm);
    // One re-orthogonalization pass keeps the residues at rounding level.
    axpy(best, -dot(r1, best), r1);
    axpy(best, -dot(r2, best), r2);
    scale(best, 1.0 / norm(best));
    fix_phase(best);
    return best;
}

StateVector to_state(const Vec3& v) { return StateVector::qutrit(v[0], v[1], v[2]); }

}  // namespace

std::pair<StateVector, StateVector> perp_vectors(double mu, double phi) {
    return perp_vectors(SourceConfig{SourceKind::P, mu, 0.0, phi});
}

std::pair<StateVector, StateVector> perp_vectors(const SourceConfig& cfg) {
    cfg.validate();
    if (!(cfg.mu > 0.0)) {
        throw std::invalid_argument("perp_vectors: mu must be > 0 (signals degenerate at mu = 0)");
    }
    const Vec3 z0 = to_vec(bb84_signal_p(0, Basis::Z, cfg));
    const Vec3 x0 = to_vec(bb84_signal_p(0, Basis::X, cfg));
    const Vec3 z1 = to_vec(bb84_signal_p(1, Basis::Z, cfg));
    const Vec3 x1 = to_vec(bb84_signal_p(1, Basis::X, cfg));
    return {to_state(null_vector(z0, x0)), to_state(null_vector(z1, x1))};
}

UkdPovm build_ukd_povm(double mu, double phi) {
    return build_ukd_povm(SourceConfig{SourceKind::P, mu, 0.0, phi});
}

UkdPovm build_ukd_povm(const SourceConfig& cfg) {
    auto [v0, v1] = perp_vectors(cfg);
    HermitianOperator e0 = outer_product(v1).scaled(0.5);
    HermitianOperator e1 = outer_product(v0).scaled(0.5);
    HermitianOperator edk = HermitianOperator::identity(3) - e0 - e1;
    const double mu = cfg.mu;
    UkdPovm povm{std::move(e0),
                 std::move(e1),
                 std::move(edk),
                 std::move(v0),
                 std::move(v1),
                 1.0 / std::sqrt((2.0 + kRoot2) * (1.0 + kCPlus * mu)),
                 1.0 / std::sqrt((2.0 + kRoot2) * (1.0 + kCMinus * mu))};
    (void)povm.as_povm();  // runs the positivity and completeness checks
    return povm;
}

Povm UkdPovm::as_povm() const {
    return Povm({{Outcome::Bit0, e0}, {Outcome::Bit1, e1}, {Outcome::Dk, edk}});
}

double conclusive_probability(int bit, double mu) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("conclusive_probability: bit must be 0 or 1");
    if (!(mu >= 0.0)) throw std::invalid_argument("conclusive_probability: mu must be >= 0");
    const double denom_c = bit == 0 ? kCMinus : kCPlus;
    return kCMinus * mu * std::exp(-mu) / (1.0 + denom_c * mu);
}

double detection_rate_bound(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("detection_rate_bound: mu must be >= 0");
    return kCMinus * mu * std::exp(-mu) / (1.0 + kCPlus * mu);
}

StateVector resend_state(int bit, double phi) {
    const StateVector z = single_photon_state(bit, Basis::Z, phi);
    const StateVector x = single_photon_state(bit, Basis::X, phi);
    const complexd ov = inner_product(z, x);
    const double mag = std::abs(ov);
    if (mag < 1e-15) throw std::domain_error("resend_state: signals are orthogonal");
    const complexd align = std::conj(ov) / mag;
    std::array<complexd, 2> s{z.amplitudes[0] + align * x.amplitudes[0],
                              z.amplitudes[1] + align * x.amplitudes[1]};
    const double n = std::sqrt(std::norm(s[0]) + std::norm(s[1]));
    s[0] /= n;
    s[1] /= n;
    const int idx = std::abs(s[1]) > std::abs(s[0]) ? 1 : 0;
    const complexd phase = std::conj(s[idx]) / std::abs(s[idx]);
    return StateVector::qubit(s[0] * phase, s[1] * phase);
}

double induced_error_rate() { return 0.5 - 1.0 / (2.0 * std::sqrt(2.0)); }

}  // namespace qkd
