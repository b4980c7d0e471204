#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdiwit/bounds.hpp"
#include "sdiwit/dataio.hpp"
#include "sdiwit/digest.hpp"
#include "sdiwit/format.hpp"
#include "sdiwit/interferometer.hpp"
#include "sdiwit/version.hpp"
#include "sdiwit/witness.hpp"

namespace {

using nlohmann::json;
using namespace sdiwit;

constexpr double kPi = std::numbers::pi;
constexpr double kQuantumBound = 2.8284271247461903;  // 2*sqrt(2)
constexpr int kScanPoints = 256;                      // phi_x settings per fringe scan

// Every artifact is emitted together with a manifest holding the command,
// its parameters, the tool version and a digest of the payload bytes. With
// --out the manifest lands next to the file; otherwise payload goes to
// stdout and the manifest to stderr.
int emit(const std::string& payload, const std::string& out_path, const std::string& command,
         const json& parameters, const json& seed) {
    const json manifest{{"command", command},
                        {"parameters", parameters},
                        {"seed", seed},
                        {"version", kVersion},
                        {"output_digest", "fnv1a64:" + hex16(fnv1a64(payload))}};
    if (out_path.empty()) {
        std::cout << payload;
        std::cerr << manifest.dump(2) << "\n";
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
    }
    out << payload;
    std::ofstream mout(out_path + ".manifest.json", std::ios::binary);
    if (!mout) {
        std::cerr << "error: cannot write " << out_path << ".manifest.json\n";
        return 2;
    }
    mout << manifest.dump(2) << "\n";
    return 0;
}

json bloch_json(const BlochVector& v) { return json::array({v.x, v.y, v.z}); }

int run_scan(double phi_s_min, double phi_s_max, int steps, const std::string& out,
             const std::string& format) {
    if (steps < 2) {
        std::cerr << "error: --steps must be at least 2\n";
        return 1;
    }
    if (!std::isfinite(phi_s_min) || !std::isfinite(phi_s_max) || !(phi_s_max > phi_s_min)) {
        std::cerr << "error: scan range must be finite with --phi-s-max > --phi-s-min\n";
        return 1;
    }

    std::string csv = "phi_s,D,V,S_half,classical_bound,security_original,security_improved\n";
    json rows = json::array();
    for (int k = 0; k < steps; ++k) {
        const double phi_s = phi_s_min + (phi_s_max - phi_s_min) * k / (steps - 1);
        const DualityEstimate duality = duality_estimate(phi_s, kScanPoints);
        const double s_half = duality.d_mean + duality.v_mean;
        csv += format_double(phi_s) + ',' + format_double(duality.d_mean) + ',' +
               format_double(duality.v_mean) + ',' + format_double(s_half) + ',' +
               format_double(1.0) + ',' + format_double(kOriginalDvThreshold) + ',' +
               format_double(kImprovedDvThreshold) + '\n';
        rows.push_back({{"phi_s", phi_s},
                        {"D", duality.d_mean},
                        {"V", duality.v_mean},
                        {"S_half", s_half},
                        {"classical_bound", 1.0},
                        {"security_original", kOriginalDvThreshold},
                        {"security_improved", kImprovedDvThreshold}});
    }
    const std::string payload = format == "csv" ? csv : rows.dump(2) + "\n";
    const json params{{"phi_s_min", phi_s_min},
                      {"phi_s_max", phi_s_max},
                      {"steps", steps},
                      {"scan_points", kScanPoints},
                      {"format", format}};
    return emit(payload, out, "scan", params, nullptr);
}

int run_witness(double phi_s, double phi_x, const std::string& out) {
    const CorrelatorTable table =
        correlator_table(bb84_preparations(), tunable_measurements(phi_s, phi_x));
    const double s = witness_value(table);
    const json report{{"phi_s", phi_s},
                      {"phi_x", phi_x},
                      {"s_value", s},
                      {"p_b", bob_success(s)},
                      {"classical_bound", 2.0},
                      {"quantum_bound", kQuantumBound}};
    const json params{{"phi_s", phi_s}, {"phi_x", phi_x}};
    return emit(report.dump(2) + "\n", out, "witness", params, nullptr);
}

int run_verify_classical(const std::string& out) {
    const ClassicalCertificate cert = classical_maximum();
    const bool certified = cert.max_s == 2.0;
    const json report{{"max_s", cert.max_s},
                      {"strategies_checked", cert.strategies_checked},
                      {"best_encoder", cert.best.encoder},
                      {"best_decoder", cert.best.decoder},
                      {"certified", certified}};
    const int rc = emit(report.dump(2) + "\n", out, "verify-classical", json::object(), nullptr);
    if (rc != 0) return rc;
    if (!certified) {
        std::cerr << "error: enumerated classical maximum is " << format_double(cert.max_s)
                  << ", expected 2\n";
        return 3;
    }
    return 0;
}

int run_optimize_quantum(std::uint64_t seed, int restarts, const std::string& out) {
    if (restarts < 1) {
        std::cerr << "error: --restarts must be at least 1\n";
        return 1;
    }
    if (seed < 1) {
        std::cerr << "error: --seed must be at least 1\n";
        return 1;
    }
    const SeeSawResult result = quantum_maximum(seed, restarts);
    const bool converged = std::abs(result.s_value - kQuantumBound) <= 1e-6;
    const bool within_bound =
        std::all_of(result.restart_values.begin(), result.restart_values.end(),
                    [](double v) { return v <= kQuantumBound + 1e-9; });
    const json report{
        {"s_value", result.s_value},
        {"quantum_bound", kQuantumBound},
        {"gap", kQuantumBound - result.s_value},
        {"converged", converged},
        {"within_bound", within_bound},
        {"sweeps", result.trace.size()},
        {"restart_values", result.restart_values},
        {"ansatz",
         {{"preparations",
           json::array({bloch_json(result.ansatz.preparations[0]),
                        bloch_json(result.ansatz.preparations[1]),
                        bloch_json(result.ansatz.preparations[2]),
                        bloch_json(result.ansatz.preparations[3])})},
          {"measurements", json::array({bloch_json(result.ansatz.measurements[0]),
                                        bloch_json(result.ansatz.measurements[1])})}}}};
    const json params{{"seed", seed}, {"restarts", restarts}};
    const int rc = emit(report.dump(2) + "\n", out, "optimize-quantum", params, seed);
    if (rc != 0) return rc;
    if (!converged || !within_bound) {
        std::cerr << "error: optimizer did not certify the quantum bound\n";
        return 3;
    }
    return 0;
}

json verdict_json(const SecurityVerdict& verdict) {
    return json{{"p_b", verdict.p_b},
                {"p_e_cap_original", verdict.p_e_cap_original},
                {"p_e_cap_improved", verdict.p_e_cap_improved},
                {"secure_original", verdict.secure_original},
                {"secure_improved", verdict.secure_improved},
                {"pb_threshold_original", kOriginalPbThreshold},
                {"pb_threshold_improved", kImprovedPbThreshold},
                {"dv_threshold_original", verdict.dv_threshold_original},
                {"dv_threshold_improved", verdict.dv_threshold_improved},
                {"dv_threshold_improved_rounded", 1.332}};
}

int run_bounds(bool has_pb, double pb, bool has_d, double d, bool has_v, double v,
               const std::string& out) {
    const bool dv_form = has_d || has_v;
    if (has_pb == dv_form || (dv_form && !(has_d && has_v))) {
        std::cerr << "error: provide either --pb or both --d and --v\n";
        return 1;
    }
    json params = json::object();
    double p_b = 0.0;
    if (has_pb) {
        if (!(pb >= 0.0 && pb <= 1.0)) {
            std::cerr << "error: --pb must lie in [0, 1]\n";
            return 2;
        }
        p_b = pb;
        params["pb"] = pb;
    } else {
        if (!(d >= 0.0 && d <= 1.0) || !(v >= 0.0 && v <= 1.0)) {
            std::cerr << "error: --d and --v must lie in [0, 1]\n";
            return 2;
        }
        p_b = bob_success(symmetric_witness(d, v));
        params["d"] = d;
        params["v"] = v;
    }
    const SecurityVerdict verdict = security_verdict(p_b);
    json report = verdict_json(verdict);
    if (!has_pb) {
        report["d"] = d;
        report["v"] = v;
        report["dv"] = d + v;
    }
    return emit(report.dump(2) + "\n", out, "bounds", params, nullptr);
}

int run_analyze(const std::string& file, const std::string& estimator, const std::string& out,
                const std::string& format) {
    const ExtremumMode mode =
        estimator == "sinefit" ? ExtremumMode::SineFit : ExtremumMode::CountExtrema;
    ScanDataset ds;
    try {
        ds = parse_scan_file(file);
    } catch (const ScanParseError& e) {
        std::cerr << "error: " << file << ": " << e.what() << "\n";
        return 2;
    }
    const std::vector<double> groups = distinct_phi_s(ds);
    if (groups.empty()) {
        std::cerr << "error: " << file << ": no data rows\n";
        return 2;
    }

    std::string csv =
        "phi_s,D,D_sigma,V,V_sigma,S_half,S_half_sigma,p_b,"
        "classical_violation,secure_original,secure_improved\n";
    json rows = json::array();
    for (double phi_s : groups) {
        DualityWithError est;
        try {
            est = estimate_duality(select_phi_s(ds, phi_s), mode);
        } catch (const std::exception& e) {
            std::cerr << "error: " << file << ": phi_s=" << format_double(phi_s) << ": "
                      << e.what() << "\n";
            return 2;
        }
        const double s_half = est.d.value + est.v.value;
        const double s_half_sigma = std::hypot(est.d.sigma, est.v.sigma);
        // noisy estimates can poke past the algebraic range; clamp for P_B
        const double s_value = std::clamp(2.0 * s_half, -4.0, 4.0);
        const double p_b = bob_success(s_value);
        const SecurityVerdict verdict = security_verdict(p_b);
        rows.push_back({{"phi_s", phi_s},
                        {"d", {{"value", est.d.value}, {"sigma", est.d.sigma}}},
                        {"v", {{"value", est.v.value}, {"sigma", est.v.sigma}}},
                        {"s_half", {{"value", s_half}, {"sigma", s_half_sigma}}},
                        {"p_b", p_b},
                        {"classical_violation", s_half > 1.0},
                        {"secure_original", verdict.secure_original},
                        {"secure_improved", verdict.secure_improved}});
        csv += format_double(phi_s) + ',' + format_double(est.d.value) + ',' +
               format_double(est.d.sigma) + ',' + format_double(est.v.value) + ',' +
               format_double(est.v.sigma) + ',' + format_double(s_half) + ',' +
               format_double(s_half_sigma) + ',' + format_double(p_b) + ',' +
               (s_half > 1.0 ? "1" : "0") + ',' + (verdict.secure_original ? "1" : "0") + ',' +
               (verdict.secure_improved ? "1" : "0") + '\n';
    }

    json report{{"source", ds.source},
                {"estimator", to_string(mode)},
                {"groups", rows}};
    if (ds.mean_photon_number) report["mu"] = *ds.mean_photon_number;
    const std::string payload = format == "csv" ? csv : report.dump(2) + "\n";
    const json params{{"file", file}, {"estimator", estimator}, {"format", format}};
    return emit(payload, out, "analyze", params, nullptr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interferometric duality witness toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string out;
    std::string format = "csv";

    auto* scan = app.add_subcommand("scan", "Model sweep of D, V and S/2 over phi_s");
    double phi_s_min = 0.0;
    double phi_s_max = kPi / 2;
    int steps = 101;
    scan->add_option("--phi-s-min", phi_s_min, "Lower end of the phi_s range (radians)");
    scan->add_option("--phi-s-max", phi_s_max, "Upper end of the phi_s range (radians)");
    scan->add_option("--steps", steps, "Number of phi_s samples");
    scan->add_option("--out", out, "Write the table here instead of stdout");
    scan->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* witness = app.add_subcommand("witness", "Evaluate S and P_B at one (phi_s, phi_x)");
    double phi_s = 0.0;
    double phi_x = 0.0;
    witness->add_option("--phi-s", phi_s, "Measurement interpolation phase (radians)")
        ->required();
    witness->add_option("--phi-x", phi_x, "Internal phase (radians)")->required();
    witness->add_option("--out", out, "Write the report here instead of stdout");

    auto* verify =
        app.add_subcommand("verify-classical", "Enumerate all deterministic bit strategies");
    verify->add_option("--out", out, "Write the report here instead of stdout");

    auto* optimize =
        app.add_subcommand("optimize-quantum", "See-saw search for the quantum maximum");
    std::uint64_t seed = 42;
    int restarts = 20;
    optimize->add_option("--seed", seed, "Random seed (>= 1)");
    optimize->add_option("--restarts", restarts, "Independent restarts");
    optimize->add_option("--out", out, "Write the report here instead of stdout");

    auto* bounds = app.add_subcommand("bounds", "Security verdict from P_B or from (D, V)");
    double pb = 0.0, d_in = 0.0, v_in = 0.0;
    auto* pb_opt = bounds->add_option("--pb", pb, "Receiver success probability");
    auto* d_opt = bounds->add_option("--d", d_in, "Distinguishability");
    auto* v_opt = bounds->add_option("--v", v_in, "Visibility");
    bounds->add_option("--out", out, "Write the report here instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "Estimate D, V and verdicts from scan data");
    std::string file;
    std::string estimator = "extrema";
    std::string analyze_format = "json";
    analyze->add_option("file", file, "Input scan CSV")->required();
    analyze->add_option("--estimator", estimator, "Fringe extremum extraction")
        ->check(CLI::IsMember({"extrema", "sinefit"}));
    analyze->add_option("--out", out, "Write the report here instead of stdout");
    analyze->add_option("--format", analyze_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (scan->parsed()) return run_scan(phi_s_min, phi_s_max, steps, out, format);
        if (witness->parsed()) return run_witness(phi_s, phi_x, out);
        if (verify->parsed()) return run_verify_classical(out);
        if (optimize->parsed()) return run_optimize_quantum(seed, restarts, out);
        if (bounds->parsed())
            return run_bounds(pb_opt->count() > 0, pb, d_opt->count() > 0, d_in,
                              v_opt->count() > 0, v_in, out);
        if (analyze->parsed()) return run_analyze(file, estimator, out, analyze_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}
