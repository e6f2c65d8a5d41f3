#pragma once

#include <string>

#include "qkd/protocol.hpp"
#include "qkd/security.hpp"
#include "qkd/source.hpp"

// Report assembly and serialization for the CLI: JSON for single reports,
// CSV / JSON-lines for sweep tables. Numbers are serialized with 9
// significant digits so regression diffs are byte-stable.

namespace qkd {

// %.9g formatting used for every floating-point field.
std::string format_number(double v);

const char* to_string(VerdictR v);  // "SECURE" / "NOT_PROVEN"
const char* to_string(VerdictP v);  // "BROKEN" / "UNKNOWN"

// Both sides of the source comparison at one operating point: the attack
// figures against source P and the security verdict for source R.
struct AnalyzeReport {
    double mu;
    double delta;
    double phi;
    PhotonStats photon;
    // Operator-route conclusive probabilities at the requested phi, averaged
    // over the two bases for each key bit (at phi = 0 these equal the closed
    // forms).
    double conclusive_bit0;
    double conclusive_bit1;
    double detection_rate_bound;  // fixed-plane closed-form lower bound
    double detection_rate_mean;   // mean over the four signals
    double induced_error_rate;
    double eve_knowledge;         // per conclusive outcome; identically 1
    SecurityReport security;      // computed with p_d = detection_rate_bound
};

AnalyzeReport make_analyze_report(double mu, double delta, double phi);
std::string to_json(const AnalyzeReport& report);

// One sweep table row. p_d_attack is the fixed-plane detection-rate bound
// (what the verdict uses); p_d_honest = 1 - e^-mu.
struct SweepRow {
    double mu;
    PhotonStats photon;
    double p_d_attack;
    double p_d_honest;
    double conclusive_bit0;
    double conclusive_bit1;
    double big_delta;
    double delta_p_bound;
    VerdictR verdict_r;
};

SweepRow make_sweep_row(double mu, double delta, double phi);
std::string sweep_csv_header();
std::string to_csv(const SweepRow& row);
std::string to_json_line(const SweepRow& row);

// Config echo, counters, rates, and binomial standard errors.
std::string to_json(const RunConfig& config, const ProtocolStats& stats);

// {"command":"threshold",...} with the solver tolerance.
std::string threshold_json(double delta, double mu_star);

}  // namespace qkd
