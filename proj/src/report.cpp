#include "qkd/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qkd/attack.hpp"

namespace qkd {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const char* to_string(VerdictR v) { return v == VerdictR::Secure ? "SECURE" : "NOT_PROVEN"; }
const char* to_string(VerdictP v) { return v == VerdictP::Broken ? "BROKEN" : "UNKNOWN"; }

namespace {

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

std::string security_json(const SecurityReport& s, const std::string& indent) {
    std::ostringstream o;
    o << "{\n"
      << indent << "  \"mu\": " << num(s.mu) << ",\n"
      << indent << "  \"delta\": " << num(s.delta) << ",\n"
      << indent << "  \"p_d\": " << num(s.p_d) << ",\n"
      << indent << "  \"p_m\": " << num(s.p_m) << ",\n"
      << indent << "  \"big_delta\": " << num(s.big_delta) << ",\n"
      << indent << "  \"delta_p_bound\": " << num(s.delta_p_bound) << ",\n"
      << indent << "  \"threshold_one_way\": " << num(s.threshold_one_way) << ",\n"
      << indent << "  \"threshold_two_way\": " << num(s.threshold_two_way) << ",\n"
      << indent << "  \"verdict_R\": \"" << to_string(s.verdict_r) << "\",\n"
      << indent << "  \"verdict_P\": \"" << to_string(s.verdict_p) << "\",\n"
      << indent << "  \"mu_star\": " << num(s.mu_star) << ",\n"
      << indent << "  \"basis_independent_detection\": "
      << (s.basis_independent_detection ? "true" : "false") << "\n"
      << indent << "}";
    return o.str();
}

}  // namespace

AnalyzeReport make_analyze_report(double mu, double delta, double phi) {
    if (!(mu > 0.0)) throw std::invalid_argument("analyze: mu must be > 0");
    const SourceConfig src{SourceKind::P, mu, 0.0, phi};
    const UkdPovm povm = build_ukd_povm(src);
    auto conclusive = [&](int bit) {
        const HermitianOperator& e = bit == 0 ? povm.e0 : povm.e1;
        return 0.5 * (expectation(bb84_signal_p(bit, Basis::Z, src), e) +
                      expectation(bb84_signal_p(bit, Basis::X, src), e));
    };
    AnalyzeReport r{};
    r.mu = mu;
    r.delta = delta;
    r.phi = phi;
    r.photon = photon_statistics(mu);
    r.conclusive_bit0 = conclusive(0);
    r.conclusive_bit1 = conclusive(1);
    r.detection_rate_bound = qkd::detection_rate_bound(mu);
    r.detection_rate_mean = 0.5 * (r.conclusive_bit0 + r.conclusive_bit1);
    r.induced_error_rate = qkd::induced_error_rate();
    r.eve_knowledge = 1.0;
    r.security = secure_verdict(delta, mu, r.detection_rate_bound);
    return r;
}

std::string to_json(const AnalyzeReport& r) {
    std::ostringstream o;
    o << "{\n"
      << "  \"command\": \"analyze\",\n"
      << "  \"mu\": " << num(r.mu) << ",\n"
      << "  \"delta\": " << num(r.delta) << ",\n"
      << "  \"phi\": " << num(r.phi) << ",\n"
      << "  \"photon\": {\n"
      << "    \"p0\": " << num(r.photon.p0) << ",\n"
      << "    \"p1\": " << num(r.photon.p1) << ",\n"
      << "    \"pM\": " << num(r.photon.pM) << "\n"
      << "  },\n"
      << "  \"attack\": {\n"
      << "    \"conclusive_prob_bit0\": " << num(r.conclusive_bit0) << ",\n"
      << "    \"conclusive_prob_bit1\": " << num(r.conclusive_bit1) << ",\n"
      << "    \"detection_rate_bound\": " << num(r.detection_rate_bound) << ",\n"
      << "    \"detection_rate_mean\": " << num(r.detection_rate_mean) << ",\n"
      << "    \"induced_error_rate\": " << num(r.induced_error_rate) << ",\n"
      << "    \"eve_knowledge\": " << num(r.eve_knowledge) << "\n"
      << "  },\n"
      << "  \"security\": " << security_json(r.security, "  ") << "\n"
      << "}\n";
    return o.str();
}

SweepRow make_sweep_row(double mu, double delta, double phi) {
    const AnalyzeReport a = make_analyze_report(mu, delta, phi);
    return {mu,
            a.photon,
            a.detection_rate_bound,
            -std::expm1(-mu),
            a.conclusive_bit0,
            a.conclusive_bit1,
            a.security.big_delta,
            a.security.delta_p_bound,
            a.security.verdict_r};
}

std::string sweep_csv_header() {
    return "mu,p0,p1,pM,p_d_attack,p_d_honest,conclusive_prob_bit0,conclusive_prob_bit1,"
           "big_delta,delta_p_bound,verdict_R";
}

std::string to_csv(const SweepRow& r) {
    std::ostringstream o;
    o << num(r.mu) << ',' << num(r.photon.p0) << ',' << num(r.photon.p1) << ','
      << num(r.photon.pM) << ',' << num(r.p_d_attack) << ',' << num(r.p_d_honest) << ','
      << num(r.conclusive_bit0) << ',' << num(r.conclusive_bit1) << ',' << num(r.big_delta)
      << ',' << num(r.delta_p_bound) << ',' << to_string(r.verdict_r);
    return o.str();
}

std::string to_json_line(const SweepRow& r) {
    std::ostringstream o;
    o << "{\"mu\": " << num(r.mu) << ", \"p0\": " << num(r.photon.p0)
      << ", \"p1\": " << num(r.photon.p1) << ", \"pM\": " << num(r.photon.pM)
      << ", \"p_d_attack\": " << num(r.p_d_attack) << ", \"p_d_honest\": " << num(r.p_d_honest)
      << ", \"conclusive_prob_bit0\": " << num(r.conclusive_bit0)
      << ", \"conclusive_prob_bit1\": " << num(r.conclusive_bit1)
      << ", \"big_delta\": " << num(r.big_delta)
      << ", \"delta_p_bound\": " << num(r.delta_p_bound) << ", \"verdict_R\": \""
      << to_string(r.verdict_r) << "\"}";
    return o.str();
}

std::string to_json(const RunConfig& cfg, const ProtocolStats& s) {
    const double dr_se =
        std::sqrt(s.detection_rate * (1.0 - s.detection_rate) / static_cast<double>(s.sent));
    const double er_se = s.sifted > 0 ? std::sqrt(s.error_rate_hat * (1.0 - s.error_rate_hat) /
                                                  static_cast<double>(s.sifted))
                                      : 0.0;
    std::ostringstream o;
    o << "{\n"
      << "  \"command\": \"simulate\",\n"
      << "  \"config\": {\n"
      << "    \"n_signals\": " << num(cfg.n_signals) << ",\n"
      << "    \"mu\": " << num(cfg.source.mu) << ",\n"
      << "    \"theta\": " << num(cfg.source.theta) << ",\n"
      << "    \"phi\": " << num(cfg.source.phi) << ",\n"
      << "    \"attack\": \"" << (cfg.attack == AttackKind::Ukd ? "ukd" : "none") << "\",\n"
      << "    \"source_kind\": \"" << (cfg.source.kind == SourceKind::P ? "P" : "R") << "\",\n"
      << "    \"transmittance\": " << num(cfg.channel_transmittance) << ",\n"
      << "    \"seed\": " << num(cfg.seed) << ",\n"
      << "    \"workers\": " << cfg.workers << "\n"
      << "  },\n"
      << "  \"stats\": {\n"
      << "    \"sent\": " << num(s.sent) << ",\n"
      << "    \"detected\": " << num(s.detected) << ",\n"
      << "    \"sifted\": " << num(s.sifted) << ",\n"
      << "    \"errors\": " << num(s.errors) << ",\n"
      << "    \"sent_bit0\": " << num(s.sent_bit0) << ",\n"
      << "    \"sent_bit1\": " << num(s.sent_bit1) << ",\n"
      << "    \"detected_bit0\": " << num(s.detected_bit0) << ",\n"
      << "    \"detected_bit1\": " << num(s.detected_bit1) << ",\n"
      << "    \"eve_sifted_matches\": " << num(s.eve_sifted_matches) << ",\n"
      << "    \"detection_rate\": " << num(s.detection_rate) << ",\n"
      << "    \"detection_rate_se\": " << num(dr_se) << ",\n"
      << "    \"error_rate_hat\": " << num(s.error_rate_hat) << ",\n"
      << "    \"error_rate_se\": " << num(er_se) << ",\n"
      << "    \"eve_agreement\": "
      << (s.eve_agreement.has_value() ? num(*s.eve_agreement) : std::string("null")) << "\n"
      << "  }\n"
      << "}\n";
    return o.str();
}

std::string threshold_json(double delta, double mu_star) {
    std::ostringstream o;
    o << "{\"command\": \"threshold\", \"delta\": " << num(delta)
      << ", \"mu_star\": " << num(mu_star) << ", \"tolerance\": " << num(1e-6) << "}\n";
    return o.str();
}

}  // namespace qkd
