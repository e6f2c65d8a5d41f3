// qkdsim: command-line front end for the BB84 weak-coherent-pulse toolkit.
//
// Verbs:
//   analyze    closed-form attack/security figures for one (mu, delta, phi)
//   simulate   Monte Carlo protocol run (honest channel or intercept-resend attack)
//   sweep      closed-form figures over a mu grid (CSV or JSON lines)
//   threshold  largest mu with a SECURE verdict for a given error rate
//
// Exit codes: 0 success, 2 usage/validation error, 1 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qkd/protocol.hpp"
#include "qkd/report.hpp"
#include "qkd/security.hpp"

namespace {

// Writes to the given path, or stdout when the path is empty.
int emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "error: cannot open output file: " << out_path << "\n";
        return 2;
    }
    f << text;
    f.flush();
    if (!f.good()) {
        std::cerr << "error: failed writing output file: " << out_path << "\n";
        return 1;
    }
    return 0;
}

std::vector<double> parse_mu_grid(const std::string& s) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &tail) != 3)
        throw std::invalid_argument("--mu-grid must have the form start:stop:step");
    if (!(start > 0.0)) throw std::invalid_argument("--mu-grid start must be > 0");
    if (!(step > 0.0)) throw std::invalid_argument("--mu-grid step must be > 0");
    if (!(stop >= start)) throw std::invalid_argument("--mu-grid stop must be >= start");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double mu = start + static_cast<double>(i) * step;
        if (mu > stop + step * 1e-9) break;  // tolerate FP drift at the last point
        if (i > 1000000) throw std::invalid_argument("--mu-grid has too many points");
        grid.push_back(mu);
    }
    return grid;
}

struct AnalyzeArgs {
    double mu = 0.0;
    double delta = 0.0;
    double phi = 0.0;
    std::string format = "json";
    std::string out;
};

struct SimulateArgs {
    std::uint64_t n_signals = 100000;
    double mu = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::string attack = "none";
    double transmittance = 1.0;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;
};

struct SweepArgs {
    std::string mu_grid;
    double delta = 0.0;
    double phi = 0.0;
    std::string format = "csv";
    std::string out;
};

struct ThresholdArgs {
    double delta = 0.0;
    std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
    if (a.format != "json") throw std::invalid_argument("analyze: --format must be json");
    const qkd::AnalyzeReport report = qkd::make_analyze_report(a.mu, a.delta, a.phi);
    return emit(a.out, qkd::to_json(report));
}

int run_simulate(const SimulateArgs& a) {
    qkd::RunConfig cfg;
    cfg.n_signals = a.n_signals;
    cfg.source.mu = a.mu;
    cfg.source.theta = a.theta;
    cfg.source.phi = a.phi;
    cfg.channel_transmittance = a.transmittance;
    cfg.seed = a.seed;
    cfg.workers = a.workers;
    if (a.attack == "ukd") {
        cfg.attack = qkd::AttackKind::Ukd;
        cfg.source.kind = qkd::SourceKind::P;  // the attack targets the phase-coherent source
    } else if (a.attack == "none") {
        cfg.attack = qkd::AttackKind::None;
        cfg.source.kind = qkd::SourceKind::R;
    } else {
        throw std::invalid_argument("simulate: --attack must be none or ukd");
    }
    cfg.validate();
    const qkd::ProtocolStats stats = qkd::run_protocol(cfg);
    return emit(a.out, qkd::to_json(cfg, stats));
}

int run_sweep(const SweepArgs& a) {
    if (a.format != "csv" && a.format != "json")
        throw std::invalid_argument("sweep: --format must be csv or json");
    const std::vector<double> grid = parse_mu_grid(a.mu_grid);
    std::string text;
    if (a.format == "csv") text += qkd::sweep_csv_header() + "\n";
    for (const double mu : grid) {
        const qkd::SweepRow row = qkd::make_sweep_row(mu, a.delta, a.phi);
        text += (a.format == "csv" ? qkd::to_csv(row) : qkd::to_json_line(row)) + "\n";
    }
    return emit(a.out, text);
}

int run_threshold(const ThresholdArgs& a) {
    const double mu_star = qkd::max_secure_mu(a.delta);
    return emit(a.out, qkd::threshold_json(a.delta, mu_star));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BB84 weak-coherent-pulse security toolkit"};
    app.require_subcommand(1);
    // One config option for the whole tool; keys live in one section per
    // subcommand ([analyze] mu=0.1 ...). Flags always win over the file.
    app.set_config("--config", "",
                   "Read options from an INI file with one section per subcommand");

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Closed-form attack and security figures for one parameter point");
    analyze->fallthrough();
    analyze->add_option("--mu", an.mu, "Mean photon number (> 0)")->required();
    analyze->add_option("--delta", an.delta, "Observed sifted-key error rate in [0,1]")
        ->required();
    analyze->add_option("--phi", an.phi, "X-basis phase offset (radians)");
    analyze->add_option("--format", an.format, "Output format (json)");
    analyze->add_option("--out", an.out, "Write the report to this file instead of stdout");

    SimulateArgs si;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo BB84 run over a lossy channel");
    simulate->fallthrough();
    simulate->add_option("--n-signals", si.n_signals, "Number of signals to send");
    simulate->add_option("--mu", si.mu, "Mean photon number (> 0)")->required();
    simulate->add_option("--theta", si.theta, "Coherent amplitude phase (radians)");
    simulate->add_option("--phi", si.phi, "X-basis phase offset (radians)");
    simulate->add_option("--attack", si.attack, "Channel model: none or ukd");
    simulate->add_option("--transmittance", si.transmittance,
                         "Honest channel transmittance in (0,1]");
    simulate->add_option("--seed", si.seed, "PRNG seed");
    simulate->add_option("--workers", si.workers, "Worker threads (results are invariant)");
    simulate->add_option("--out", si.out, "Write the report to this file instead of stdout");

    SweepArgs sw;
    CLI::App* sweep =
        app.add_subcommand("sweep", "Closed-form figures over a grid of mu values");
    sweep->fallthrough();
    sweep->add_option("--mu-grid", sw.mu_grid, "Grid as start:stop:step (start > 0)")
        ->required();
    sweep->add_option("--delta", sw.delta, "Observed sifted-key error rate in [0,1]")
        ->required();
    sweep->add_option("--phi", sw.phi, "X-basis phase offset (radians)");
    sweep->add_option("--format", sw.format, "Output format: csv or json");
    sweep->add_option("--out", sw.out, "Write the table to this file instead of stdout");

    ThresholdArgs th;
    CLI::App* threshold = app.add_subcommand(
        "threshold", "Largest mu that keeps the SECURE verdict for a given error rate");
    threshold->fallthrough();
    threshold->add_option("--delta", th.delta, "Observed sifted-key error rate in [0,1)")
        ->required();
    threshold->add_option("--out", th.out, "Write the result to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // fold CLI11's error codes into "usage error"
    }

    try {
        if (analyze->parsed()) return run_analyze(an);
        if (simulate->parsed()) return run_simulate(si);
        if (sweep->parsed()) return run_sweep(sw);
        if (threshold->parsed()) return run_threshold(th);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
