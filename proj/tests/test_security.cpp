#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qkd/attack.hpp"
#include "qkd/security.hpp"

using namespace qkd;
using doctest::Approx;

TEST_CASE("multiphoton bound and fraction") {
    CHECK(multiphoton_bound(0.1) == Approx(0.005).epsilon(1e-15));
    CHECK(multiphoton_bound(0.0) == 0.0);
    CHECK_THROWS_AS(multiphoton_bound(-0.1), std::invalid_argument);

    CHECK(multiphoton_fraction(0.005, 0.01) == Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(multiphoton_fraction(0.005, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(multiphoton_fraction(0.005, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(multiphoton_fraction(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(multiphoton_fraction(0.6, 0.5), std::invalid_argument);
}

TEST_CASE("phase error bound") {
    CHECK(phase_error_bound(0.1, 0.05) == Approx(0.125).epsilon(1e-15));
    CHECK(phase_error_bound(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(phase_error_bound(1.2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(phase_error_bound(0.1, -0.1), std::invalid_argument);
}

TEST_CASE("multiphoton fraction bound under the attack detection rate") {
    CHECK(big_delta_bound(0.02) == Approx(0.07085293886199398).epsilon(1e-12));
    CHECK(big_delta_bound(0.0235) == Approx(0.08378948997216644).epsilon(1e-12));
    CHECK(big_delta_bound(0.0245) == Approx(0.08751556796943379).epsilon(1e-12));
    CHECK(big_delta_bound(0.03) == Approx(0.10824842347741889).epsilon(1e-12));

    // consistency: big_delta_bound * detection bound = mu^2 / 2
    for (double mu : {0.005, 0.024, 0.1, 0.3}) {
        CHECK(big_delta_bound(mu) * detection_rate_bound(mu) ==
              Approx(0.5 * mu * mu).epsilon(1e-13));
    }
    // strictly increasing
    double prev = 0.0;
    for (double mu : {0.01, 0.02, 0.05, 0.1, 0.2}) {
        double d = big_delta_bound(mu);
        CHECK(d > prev);
        prev = d;
    }
    CHECK_THROWS_AS(big_delta_bound(0.0), std::invalid_argument);

    // leading coefficient of big_delta_bound(mu)/mu as mu -> 0, quoted
    // elsewhere to two decimals as 3.42
    const double coeff = 0.5 / induced_error_rate();
    CHECK(coeff == Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(coeff - 3.42) < 0.01);
    CHECK(big_delta_bound(1e-8) / 1e-8 == Approx(coeff).epsilon(1e-6));
}

TEST_CASE("secure_verdict wires the report together") {
    SecurityReport r = secure_verdict(0.146, 0.0235, detection_rate_bound(0.0235));
    CHECK(r.mu == 0.0235);
    CHECK(r.delta == 0.146);
    CHECK(r.p_m == Approx(0.5 * 0.0235 * 0.0235).epsilon(1e-15));
    CHECK(r.big_delta == Approx(0.08378948997216644).epsilon(1e-12));
    CHECK(r.delta_p_bound == Approx(0.146 + 0.08378948997216644 / 2).epsilon(1e-12));
    CHECK(r.threshold_one_way == 0.110);
    CHECK(r.threshold_two_way == 0.189);
    CHECK(r.verdict_r == VerdictR::Secure);   // 0.14644660940672627... < 0.189
    CHECK(r.verdict_p == VerdictP::Broken);   // 0.146 is the attack's own rate
    CHECK(r.basis_independent_detection);
    CHECK(r.mu_star == Approx(0.02409368555206015).epsilon(1e-4));

    // same error rate, slightly hotter source: the phase-error bound crosses 0.189
    SecurityReport r2 = secure_verdict(0.146, 0.0245, detection_rate_bound(0.0245));
    CHECK(r2.delta_p_bound > 0.189);
    CHECK(r2.verdict_r == VerdictR::NotProven);
    CHECK(r2.verdict_p == VerdictP::Broken);

    // low error rate: nothing broken, still not provable at mu = 0.1
    SecurityReport r3 = secure_verdict(0.05, 0.1, detection_rate_bound(0.1));
    CHECK(r3.verdict_p == VerdictP::Unknown);
    CHECK(r3.verdict_r == VerdictR::NotProven);  // 0.05 + 0.4095/2 > 0.189
    CHECK(r3.mu_star == Approx(0.07145170886096253).epsilon(1e-4));

    // error rate beyond the two-way threshold: no verdict, mu_star = 0
    SecurityReport r4 = secure_verdict(0.2, 0.02, detection_rate_bound(0.02));
    CHECK(r4.verdict_r == VerdictR::NotProven);
    CHECK(r4.mu_star == 0.0);

    // vacuous bound (big_delta > 1) is reported unclamped and never secure
    SecurityReport r5 = secure_verdict(0.0, 0.5, detection_rate_bound(0.5));
    CHECK(r5.big_delta > 1.0);
    CHECK(r5.verdict_r == VerdictR::NotProven);
}

TEST_CASE("max_secure_mu matches frozen solver outputs") {
    CHECK(max_secure_mu(0.0) == Approx(0.09339617339625761).epsilon(1e-4));
    CHECK(max_secure_mu(0.05) == Approx(0.07145170886096253).epsilon(1e-4));
    CHECK(max_secure_mu(0.11) == Approx(0.04277734178330661).epsilon(1e-4));
    CHECK(max_secure_mu(0.146) == Approx(0.02409368555206015).epsilon(1e-4));
    CHECK(max_secure_mu(0.18) == Approx(0.005221352286440606).epsilon(4e-4));
    CHECK(max_secure_mu(0.189) == 0.0);
    CHECK(max_secure_mu(0.3) == 0.0);
    CHECK_THROWS_AS(max_secure_mu(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(max_secure_mu(1.0), std::invalid_argument);

    // the root satisfies the defining equation to solver precision
    for (double delta : {0.0, 0.05, 0.146}) {
        double mu_star = max_secure_mu(delta);
        CHECK(big_delta_bound(mu_star) == Approx(2.0 * (0.189 - delta)).epsilon(1e-4));
        // the verdict flips across the root
        CHECK(secure_verdict(delta, mu_star - 1e-4, detection_rate_bound(mu_star - 1e-4))
                  .verdict_r == VerdictR::Secure);
        CHECK(secure_verdict(delta, mu_star + 1e-4, detection_rate_bound(mu_star + 1e-4))
                  .verdict_r == VerdictR::NotProven);
    }
}
