#include "qkd/security.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/attack.hpp"

namespace qkd {

double multiphoton_bound(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("multiphoton_bound: mu must be >= 0");
    return 0.5 * mu * mu;
}

double multiphoton_fraction(double p_m, double p_d) {
    if (!(p_d > 0.0 && p_d <= 1.0)) {
        throw std::invalid_argument("multiphoton_fraction: p_d must be in (0, 1]");
    }
    if (!(p_m >= 0.0 && p_m <= 1.0)) {
        throw std::invalid_argument("multiphoton_fraction: p_m must be in [0, 1]");
    }
    const double ratio = p_m / p_d;
    if (ratio > 1.0 + 1e-12) {
        throw std::invalid_argument(
            "multiphoton_fraction: p_m exceeds p_d (more multiphotons than detections)");
    }
    return ratio;
}

double phase_error_bound(double delta, double big_delta) {
    if (!(delta >= 0.0 && delta <= 1.0) || !(big_delta >= 0.0 && big_delta <= 1.0)) {
        throw std::invalid_argument("phase_error_bound: inputs must be in [0, 1]");
    }
    return delta + 0.5 * big_delta;
}

double big_delta_bound(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("big_delta_bound: mu must be > 0");
    return multiphoton_bound(mu) / detection_rate_bound(mu);
}

SecurityReport secure_verdict(double delta, double mu, double p_d) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("secure_verdict: delta must be in [0, 1]");
    }
    if (!(mu > 0.0)) throw std::invalid_argument("secure_verdict: mu must be > 0");
    if (!(p_d > 0.0 && p_d <= 1.0)) {
        throw std::invalid_argument("secure_verdict: p_d must be in (0, 1]");
    }
    SecurityReport r{};
    r.mu = mu;
    r.delta = delta;
    r.p_d = p_d;
    r.p_m = multiphoton_bound(mu);
    // Unclamped on purpose: a ratio above 1 is a vacuous bound and simply
    // never certifies security.
    r.big_delta = r.p_m / p_d;
    r.delta_p_bound = delta + 0.5 * r.big_delta;
    r.verdict_r = (delta < kTwoWayThreshold && r.delta_p_bound < kTwoWayThreshold)
                      ? VerdictR::Secure
                      : VerdictR::NotProven;
    r.verdict_p = delta >= induced_error_rate() - kAttackRateTolerance ? VerdictP::Broken
                                                                       : VerdictP::Unknown;
    r.mu_star = delta < kTwoWayThreshold ? max_secure_mu(delta) : 0.0;
    return r;
}

double max_secure_mu(double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw std::invalid_argument("max_secure_mu: delta must be in [0, 1)");
    }
    if (delta >= kTwoWayThreshold) return 0.0;
    const double target = 2.0 * (kTwoWayThreshold - delta);
    double lo = 0.0;
    double hi = 0.25;
    while (big_delta_bound(hi) < target) hi *= 2.0;  // big_delta_bound is increasing and unbounded
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (big_delta_bound(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qkd
