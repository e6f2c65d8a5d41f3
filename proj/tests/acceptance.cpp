// Acceptance harness. Each check prints exactly one line:
//
//   PASS <check-name>  <measured details>
//   FAIL <check-name>  <measured details>
//
// Run with no argument to execute every check, or with a single number 1..10.
// The exit code is the number of failed checks.
//
// Tolerances are fixed here, not tuned to the implementation: operator
// identities at 1e-12, closed-form agreement at 1e-12, Monte Carlo
// concordance at 3 binomial standard deviations of the analytic value.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qkd/attack.hpp"
#include "qkd/protocol.hpp"
#include "qkd/quantum.hpp"
#include "qkd/report.hpp"
#include "qkd/security.hpp"
#include "qkd/source.hpp"

using namespace qkd;

namespace {

const double kPi = 3.141592653589793;
const double kMuGrid[] = {0.005, 0.024, 0.1, 0.3};
const double kPhiGrid[] = {0.0, kPi / 8, kPi / 4};

std::string fmt(double v) { return format_number(v); }

double sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

struct CmdResult {
    int status;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QKDSIM_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int rc = pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

// 1. POVM validity on the (mu, phi) grid: completeness to 1e-12 entrywise,
//    every element positive to -1e-12.
bool check_povm_validity(std::string& detail) {
    double worst_completeness = 0.0;
    double worst_eigenvalue = 1.0;
    for (double mu : kMuGrid) {
        for (double phi : kPhiGrid) {
            UkdPovm povm = build_ukd_povm(mu, phi);
            HermitianOperator sum = povm.e0 + povm.e1 + povm.edk;
            HermitianOperator id = HermitianOperator::identity(3);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    worst_completeness =
                        std::max(worst_completeness, std::abs(sum.at(i, j) - id.at(i, j)));
            for (const HermitianOperator* e : {&povm.e0, &povm.e1, &povm.edk})
                worst_eigenvalue = std::min(worst_eigenvalue, min_eigenvalue(*e));
        }
    }
    detail = "max |E0+E1+Edk - I| = " + fmt(worst_completeness) +
             ", min eigenvalue = " + fmt(worst_eigenvalue) + " over 12 grid points";
    return worst_completeness <= 1e-12 && worst_eigenvalue >= -1e-12;
}

// 2. Unambiguity: the conclusive element for one bit has expectation < 1e-12
//    on both signals carrying the other bit, over the whole grid.
bool check_unambiguity(std::string& detail) {
    double worst = 0.0;
    for (double mu : kMuGrid) {
        for (double phi : kPhiGrid) {
            UkdPovm povm = build_ukd_povm(mu, phi);
            for (Basis basis : {Basis::Z, Basis::X}) {
                worst = std::max(worst,
                                 expectation(bb84_signal_p(0, basis, mu, phi), povm.e1));
                worst = std::max(worst,
                                 expectation(bb84_signal_p(1, basis, mu, phi), povm.e0));
            }
        }
    }
    detail = "max wrong-bit conclusive expectation = " + fmt(worst) + " over 48 cases";
    return worst < 1e-12;
}

// 3. Closed-form agreement at mu in {0.01, 0.1, 0.5}, phi = 0:
//    (a) the conclusive-probability closed forms match the operator route to
//        1e-12 on all four signals;
//    (b) the closed-form normalization constants match norms computed
//        directly from the unnormalized perpendicular vectors. Those vectors
//        follow from the two orthogonality constraints alone: with signal
//        cores (1, sqrt(mu) c0, sqrt(mu) c1), the bit-0 solution is
//        u0 ~ (-sqrt(mu), 1, sqrt(2)-1) and the bit-1 solution is
//        u1 ~ (-sqrt(mu), 1+sqrt(2), 1), scaled by (1+sqrt 2)/sqrt 2 and
//        1/sqrt 2 respectively.
bool check_closed_form_agreement(std::string& detail) {
    const double root2 = std::sqrt(2.0);
    double worst_prob = 0.0, worst_norm = 0.0, worst_dir = 0.0;
    for (double mu : {0.01, 0.1, 0.5}) {
        UkdPovm povm = build_ukd_povm(mu, 0.0);
        for (int bit : {0, 1}) {
            const HermitianOperator& e = bit == 0 ? povm.e0 : povm.e1;
            for (Basis basis : {Basis::Z, Basis::X}) {
                double op_route = expectation(bb84_signal_p(bit, basis, mu, 0.0), e);
                worst_prob =
                    std::max(worst_prob, std::abs(op_route - conclusive_probability(bit, mu)));
            }
        }
        const double s = std::sqrt(mu);
        const double u0[] = {-s * (1 + root2) / root2, (1 + root2) / root2,
                             (root2 - 1) * (1 + root2) / root2};
        const double u1[] = {-s / root2, (1 + root2) / root2, 1 / root2};
        auto norm3 = [](const double* u) {
            return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        };
        worst_norm = std::max(worst_norm, std::abs(povm.n0 - 1.0 / norm3(u0)));
        worst_norm = std::max(worst_norm, std::abs(povm.n1 - 1.0 / norm3(u1)));
        // and the normalized directions coincide with the constructed vectors
        auto [v0, v1] = perp_vectors(mu, 0.0);
        for (int i = 0; i < 3; ++i) {
            worst_dir = std::max(worst_dir,
                                 std::abs(u0[i] / norm3(u0) - v0.amplitudes[i].real()));
            worst_dir = std::max(worst_dir,
                                 std::abs(u1[i] / norm3(u1) - v1.amplitudes[i].real()));
        }
    }
    detail = "max |operator - closed form| = " + fmt(worst_prob) +
             ", max norm-constant error = " + fmt(worst_norm) +
             ", max direction error = " + fmt(worst_dir);
    return worst_prob <= 1e-12 && worst_norm <= 1e-12 && worst_dir <= 1e-12;
}

// 4. Headline numbers from the analytic path, in under a second.
bool check_headline_numbers(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const double rate = induced_error_rate();
    const double rate_exact = 0.5 - 1.0 / (2.0 * std::sqrt(2.0));
    const double mu_star = max_secure_mu(0.146);
    const double d_low = big_delta_bound(0.0235);
    const double d_high = big_delta_bound(0.0245);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const bool rate_ok = std::abs(rate - rate_exact) <= 1e-15 &&
                         std::abs(rate - 0.1464466) < 5e-8;
    const bool mu_ok = std::abs(mu_star - 0.0240) <= 5e-4;
    const bool delta_ok = d_low < 0.086 && d_high >= 0.086;
    const bool time_ok = ms < 1000.0;
    detail = "induced error rate = " + fmt(rate) + ", mu*(0.146) = " + fmt(mu_star) +
             ", big_delta(0.0235) = " + fmt(d_low) + ", big_delta(0.0245) = " + fmt(d_high) +
             ", " + fmt(ms) + " ms";
    return rate_ok && mu_ok && delta_ok && time_ok;
}

// 5. Monte Carlo concordance with the analytic attack values at mu = 0.1,
//    n = 1e6, fixed seed.
bool check_mc_concordance(std::string& detail) {
    RunConfig cfg;
    cfg.n_signals = 1000000;
    cfg.source = SourceConfig{SourceKind::P, 0.1, 0.0, 0.0};
    cfg.attack = AttackKind::Ukd;
    cfg.seed = 20260825;
    cfg.workers = 4;
    ProtocolStats s = run_protocol(cfg);

    const double p_det = 0.012634360093755998;  // mean over the four signals
    const double q = induced_error_rate();
    const double dev_det = std::abs(s.detection_rate - p_det);
    const double dev_err = std::abs(s.error_rate_hat - q);
    const double s_det = sigma(p_det, double(cfg.n_signals));
    const double s_err = sigma(q, double(s.sifted));
    const bool agree = s.eve_agreement.has_value() && *s.eve_agreement == 1.0;
    detail = "detection rate " + fmt(s.detection_rate) + " (dev " + fmt(dev_det / s_det) +
             " sigma), error rate " + fmt(s.error_rate_hat) + " (dev " +
             fmt(dev_err / s_err) + " sigma), eve_agreement " +
             (s.eve_agreement ? fmt(*s.eve_agreement) : "absent");
    return dev_det < 3.0 * s_det && dev_err < 3.0 * s_err && agree;
}

// 6. Honest baseline: no attack, unit transmittance, Poisson detection rate,
//    exactly zero errors.
bool check_honest_baseline(std::string& detail) {
    RunConfig cfg;
    cfg.n_signals = 1000000;
    cfg.source = SourceConfig{SourceKind::R, 0.1, 0.0, 0.0};
    cfg.attack = AttackKind::None;
    cfg.channel_transmittance = 1.0;
    cfg.seed = 31;
    ProtocolStats s = run_protocol(cfg);

    const double p_det = 0.09516258196404048;  // 1 - e^{-0.1}
    const double dev = std::abs(s.detection_rate - p_det);
    const double sd = sigma(p_det, double(cfg.n_signals));
    detail = "detection rate " + fmt(s.detection_rate) + " (dev " + fmt(dev / sd) +
             " sigma of 1-e^-mu), errors = " + std::to_string(s.errors);
    return dev < 3.0 * sd && s.errors == 0 && s.error_rate_hat == 0.0;
}

// 7. Stated asymmetry direction: the conclusive probability for key bit 1
//    strictly exceeds that for bit 0, analytically at every tested mu and in
//    Monte Carlo aggregate beyond 3 sigma at mu = 0.1, n = 1e6.
//
//    The operators themselves fix the opposite ordering. Unambiguity forces
//    the bit-b conclusive element to be built on the vector perpendicular to
//    the *other* bit's signal plane: E_b = 1/2 |v_{1-b}><v_{1-b}|. Solving
//    the two orthogonality constraints at phi = 0 (see check 3) gives
//    1/2 |<v_{1-b}|psi_b>|^2 = c mu e^{-mu} / (1 + c_b mu) with
//    c = 1/2 - 1/(2 sqrt 2) for both bits, c_0 = c in the bit-0 denominator
//    and c_1 = 1/2 + 1/(2 sqrt 2) > c_0 in the bit-1 denominator. The larger
//    denominator makes the bit-1 probability the *smaller* one, and checks
//    1-3 pin the operator route to those closed forms to 1e-12. This check
//    asserts the stated direction anyway and therefore documents the
//    discrepancy by failing; the measured values are printed below.
bool check_bit_asymmetry(std::string& detail) {
    bool analytic_ok = true;
    for (double mu : {0.005, 0.024, 0.1, 0.3, 0.5})
        analytic_ok &= conclusive_probability(1, mu) > conclusive_probability(0, mu);

    RunConfig cfg;
    cfg.n_signals = 1000000;
    cfg.source = SourceConfig{SourceKind::P, 0.1, 0.0, 0.0};
    cfg.attack = AttackKind::Ukd;
    cfg.seed = 424242;
    ProtocolStats s = run_protocol(cfg);
    const double r0 = double(s.detected_bit0) / double(s.sent_bit0);
    const double r1 = double(s.detected_bit1) / double(s.sent_bit1);
    const double p0 = conclusive_probability(0, 0.1);
    const double p1 = conclusive_probability(1, 0.1);
    const double s_diff = std::sqrt(sigma(p0, double(s.sent_bit0)) * sigma(p0, double(s.sent_bit0)) +
                                    sigma(p1, double(s.sent_bit1)) * sigma(p1, double(s.sent_bit1)));
    const bool mc_ok = (r1 - r0) > 3.0 * s_diff;

    detail = "analytic p_conc(bit0) = " + fmt(p0) + " vs p_conc(bit1) = " + fmt(p1) +
             "; MC rates bit0 " + fmt(r0) + ", bit1 " + fmt(r1) + " ((r1-r0)/sigma = " +
             fmt((r1 - r0) / s_diff) + "); measured ordering is bit0 > bit1";
    return analytic_ok && mc_ok;
}

// 8. The attacked detection rate vanishes linearly: p_D(mu)/mu at mu = 1e-3
//    and mu = 1e-4 agree within 5%, both for the conservative bound and for
//    the four-signal operator mean.
bool check_linear_scaling(std::string& detail) {
    const double b3 = detection_rate_bound(1e-3) / 1e-3;
    const double b4 = detection_rate_bound(1e-4) / 1e-4;
    auto mean4 = [](double mu) {
        UkdPovm povm = build_ukd_povm(mu, 0.0);
        double acc = 0.0;
        for (int bit : {0, 1})
            for (Basis basis : {Basis::Z, Basis::X})
                acc += expectation(bb84_signal_p(bit, basis, mu, 0.0),
                                   bit == 0 ? povm.e0 : povm.e1);
        return acc / 4.0;
    };
    const double m3 = mean4(1e-3) / 1e-3;
    const double m4 = mean4(1e-4) / 1e-4;
    const double bound_ratio = b3 / b4;
    const double mean_ratio = m3 / m4;
    detail = "p_D/mu bound ratio (1e-3 vs 1e-4) = " + fmt(bound_ratio) +
             ", operator-mean ratio = " + fmt(mean_ratio);
    return std::abs(bound_ratio - 1.0) < 0.05 && std::abs(mean_ratio - 1.0) < 0.05;
}

// 9. End-to-end thesis: one analyze invocation reports SECURE for the
//    phase-randomized source and BROKEN for the phase-coherent one.
bool check_end_to_end_verdicts(std::string& detail) {
    CmdResult r = run_cli("analyze --mu 0.02 --delta 0.146");
    if (r.status != 0) {
        detail = "analyze exited with status " + std::to_string(r.status);
        return false;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(r.out);
    } catch (const std::exception& e) {
        detail = std::string("output is not valid JSON: ") + e.what();
        return false;
    }
    const std::string vr = j["security"]["verdict_R"].get<std::string>();
    const std::string vp = j["security"]["verdict_P"].get<std::string>();
    detail = "verdict_R = " + vr + ", verdict_P = " + vp + " at mu = 0.02, delta = 0.146";
    return vr == "SECURE" && vp == "BROKEN";
}

// 10. Determinism: identical seed and worker count give byte-identical
//     simulate output; changing the worker count leaves the statistics
//     unchanged, both through the CLI and at the library level.
bool check_determinism(std::string& detail) {
    const std::string args = "simulate --mu 0.1 --attack ukd --n-signals 200000 --seed 11";
    CmdResult a = run_cli(args);
    CmdResult b = run_cli(args);
    CmdResult w3 = run_cli(args + " --workers 3");
    if (a.status != 0 || b.status != 0 || w3.status != 0) {
        detail = "simulate exited nonzero";
        return false;
    }
    const bool bytes_ok = a.out == b.out && !a.out.empty();
    bool stats_ok = false;
    try {
        stats_ok = nlohmann::json::parse(a.out)["stats"] ==
                   nlohmann::json::parse(w3.out)["stats"];
    } catch (const std::exception&) {
        detail = "simulate output is not valid JSON";
        return false;
    }

    RunConfig cfg;
    cfg.n_signals = 200000;
    cfg.source = SourceConfig{SourceKind::P, 0.1, 0.0, 0.0};
    cfg.attack = AttackKind::Ukd;
    cfg.seed = 11;
    cfg.workers = 1;
    ProtocolStats s1 = run_protocol(cfg);
    cfg.workers = 3;
    ProtocolStats s3 = run_protocol(cfg);
    const bool lib_ok = same_counts(s1, s3) && s1.detection_rate == s3.detection_rate &&
                        s1.error_rate_hat == s3.error_rate_hat;

    detail = std::string("repeat run byte-identical: ") + (bytes_ok ? "yes" : "no") +
             ", workers 1 vs 3 stats identical: " + (stats_ok ? "yes" : "no") +
             ", library counters identical: " + (lib_ok ? "yes" : "no");
    return bytes_ok && stats_ok && lib_ok;
}

struct Check {
    const char* name;
    bool (*fn)(std::string&);
};

const Check kChecks[] = {
    {"01_povm_validity", check_povm_validity},
    {"02_unambiguity", check_unambiguity},
    {"03_closed_form_agreement", check_closed_form_agreement},
    {"04_headline_numbers", check_headline_numbers},
    {"05_mc_concordance", check_mc_concordance},
    {"06_honest_baseline", check_honest_baseline},
    {"07_bit_asymmetry", check_bit_asymmetry},
    {"08_linear_scaling", check_linear_scaling},
    {"09_end_to_end_verdicts", check_end_to_end_verdicts},
    {"10_determinism", check_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 10) {
            std::fprintf(stderr, "usage: %s [1..10]\n", argv[0]);
            return 64;
        }
    }
    int failures = 0;
    for (int i = 0; i < 10; ++i) {
        if (only != 0 && only != i + 1) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = kChecks[i].fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("threw: ") + e.what();
        }
        std::printf("%s %-25s %s\n", ok ? "PASS" : "FAIL", kChecks[i].name, detail.c_str());
        if (!ok) ++failures;
    }
    return failures;
}
