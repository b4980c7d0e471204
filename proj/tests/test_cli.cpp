#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sdiwit/bounds.hpp"
#include "sdiwit/dataio.hpp"
#include "sdiwit/digest.hpp"
#include "sdiwit/version.hpp"
#include "sdiwit/witness.hpp"
#include "subprocess.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr double kRoot2 = 1.4142135623730951;

std::string cli() { return std::string("\"") + SDIWIT_CLI_PATH + "\""; }

std::string quiet(const std::string& args) { return cli() + " " + args + " 2>/dev/null"; }

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("sdiwit_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("scan emits the duality trade-off table") {
    const CommandResult r = run_command(quiet("scan --steps 3"));
    REQUIRE(r.exit_code == 0);
    const auto lines = split(r.output, '\n');
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "phi_s,D,V,S_half,classical_bound,security_original,security_improved");

    const auto mid = split(lines[2], ',');
    REQUIRE(mid.size() == 7);
    CHECK(std::abs(std::stod(mid[0]) - kPi / 4) < 1e-15);
    CHECK(std::abs(std::stod(mid[1]) - kRoot2 / 2) < 1e-9);
    CHECK(std::abs(std::stod(mid[2]) - kRoot2 / 2) < 1e-9);
    CHECK(std::abs(std::stod(mid[3]) - kRoot2) < 1e-9);
    CHECK(mid[4] == "1");
    CHECK(mid[5] == "1.366");
    CHECK(mid[6] == "1.3333333333333333");

    const auto low = split(lines[1], ',');
    const auto high = split(lines[3], ',');
    CHECK(std::abs(std::stod(low[1]) - 1.0) < 1e-9);
    CHECK(std::abs(std::stod(low[2])) < 1e-9);
    CHECK(std::abs(std::stod(high[1])) < 1e-9);
    CHECK(std::abs(std::stod(high[2]) - 1.0) < 1e-9);
    CHECK(std::abs(std::stod(low[3]) - 1.0) < 1e-9);
    CHECK(std::abs(std::stod(high[3]) - 1.0) < 1e-9);
}

TEST_CASE("scan json rows mirror the csv columns") {
    const CommandResult r = run_command(quiet("scan --steps 5 --format json"));
    REQUIRE(r.exit_code == 0);
    const json rows = json::parse(r.output);
    REQUIRE(rows.is_array());
    REQUIRE(rows.size() == 5);
    for (const auto& row : rows) {
        const double d = row.at("D").get<double>();
        const double v = row.at("V").get<double>();
        CHECK(std::abs(row.at("S_half").get<double>() - (d + v)) < 1e-12);
        CHECK(std::abs(d * d + v * v - 1.0) < 1e-9);
        CHECK(row.at("classical_bound").get<double>() == 1.0);
        CHECK(row.at("security_improved").get<double>() == 4.0 / 3.0);
    }
    CHECK(std::abs(rows[2].at("S_half").get<double>() - kRoot2) < 1e-9);
}

TEST_CASE("scan rejects unusable arguments") {
    CHECK(run_command(quiet("scan --steps 1")).exit_code == 1);
    CHECK(run_command(quiet("scan --phi-s-min 1 --phi-s-max 0")).exit_code == 1);
    CHECK(run_command(quiet("scan --format yaml")).exit_code == 1);
}

TEST_CASE("witness evaluates one setting pair") {
    const CommandResult r =
        run_command(quiet("witness --phi-s 0.7853981633974483 --phi-x 3.141592653589793"));
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.output);
    CHECK(std::abs(report.at("s_value").get<double>() - 2.0 * kRoot2) < 1e-9);
    CHECK(std::abs(report.at("p_b").get<double>() - 0.8535533905932737) < 1e-12);
    CHECK(report.at("classical_bound").get<double>() == 2.0);

    CHECK(run_command(quiet("witness --phi-s 1.0")).exit_code == 1);
    CHECK(run_command(quiet("witness")).exit_code == 1);
}

TEST_CASE("verify-classical certifies the deterministic maximum") {
    const CommandResult r = run_command(quiet("verify-classical"));
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.output);
    CHECK(report.at("max_s").get<double>() == 2.0);
    CHECK(report.at("strategies_checked").get<int>() == 256);
    CHECK(report.at("certified").get<bool>());

    sdiwit::ClassicalStrategy best;
    for (int i = 0; i < 4; ++i) {
        best.encoder[i] = report.at("best_encoder")[i].get<int>();
        best.decoder[i] = report.at("best_decoder")[i].get<int>();
    }
    CHECK(sdiwit::witness_value(sdiwit::strategy_table(best)) == 2.0);
}

TEST_CASE("optimize-quantum is certified and reproducible") {
    const std::string args = "optimize-quantum --seed 9 --restarts 6";
    const CommandResult first = run_command(quiet(args));
    REQUIRE(first.exit_code == 0);
    const json report = json::parse(first.output);
    CHECK(std::abs(report.at("s_value").get<double>() - 2.0 * kRoot2) < 1e-6);
    CHECK(report.at("converged").get<bool>());
    CHECK(report.at("within_bound").get<bool>());
    REQUIRE(report.at("restart_values").size() == 6);
    for (const auto& v : report.at("restart_values"))
        CHECK(v.get<double>() <= 2.0 * kRoot2 + 1e-9);

    const CommandResult second = run_command(quiet(args));
    CHECK(second.output == first.output);

    CHECK(run_command(quiet("optimize-quantum --restarts 0")).exit_code == 1);
    CHECK(run_command(quiet("optimize-quantum --seed 0")).exit_code == 1);
}

TEST_CASE("bounds accepts either success probability or duality inputs") {
    const CommandResult split_case = run_command(quiet("bounds --pb 0.84"));
    REQUIRE(split_case.exit_code == 0);
    const json split_report = json::parse(split_case.output);
    CHECK_FALSE(split_report.at("secure_original").get<bool>());
    CHECK(split_report.at("secure_improved").get<bool>());
    CHECK(split_report.at("pb_threshold_improved").get<double>() == 5.0 / 6.0);

    const CommandResult dv_case =
        run_command(quiet("bounds --d 0.7071067811865476 --v 0.7071067811865476"));
    REQUIRE(dv_case.exit_code == 0);
    const json dv_report = json::parse(dv_case.output);
    CHECK(std::abs(dv_report.at("p_b").get<double>() - 0.8535533905932737) < 1e-12);
    CHECK(dv_report.at("secure_original").get<bool>());
    CHECK(dv_report.at("secure_improved").get<bool>());
    CHECK(std::abs(dv_report.at("dv").get<double>() - kRoot2) < 1e-15);

    const CommandResult insecure = run_command(quiet("bounds --pb 0.5"));
    REQUIRE(insecure.exit_code == 0);
    const json insecure_report = json::parse(insecure.output);
    CHECK_FALSE(insecure_report.at("secure_original").get<bool>());
    CHECK_FALSE(insecure_report.at("secure_improved").get<bool>());
}

TEST_CASE("bounds rejects malformed input forms") {
    CHECK(run_command(quiet("bounds")).exit_code == 1);
    CHECK(run_command(quiet("bounds --pb 0.9 --d 0.5 --v 0.5")).exit_code == 1);
    CHECK(run_command(quiet("bounds --d 0.5")).exit_code == 1);
    CHECK(run_command(quiet("bounds --pb 1.5")).exit_code == 2);
    CHECK(run_command(quiet("bounds --d 1.2 --v 0.5")).exit_code == 2);
}

TEST_CASE("analyze recovers the duality point from synthetic counts") {
    TempDir dir;
    const fs::path input = dir.path / "quarter.csv";
    {
        const sdiwit::ScanDataset ds =
            sdiwit::synthesize_counts(kPi / 4, sdiwit::phase_grid(64), 1e4, 5);
        std::ofstream out(input, std::ios::binary);
        sdiwit::write_scan(ds, out);
    }

    const CommandResult r = run_command(quiet("analyze " + input.string()));
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.output);
    CHECK(report.at("estimator") == "count-extrema");
    CHECK(report.at("source").get<std::string>().find("seed=5") != std::string::npos);
    REQUIRE(report.at("groups").size() == 1);
    const json& g = report.at("groups")[0];
    const double s_half = g.at("s_half").at("value").get<double>();
    const double sigma = g.at("s_half").at("sigma").get<double>();
    CHECK(sigma > 0.0);
    CHECK(std::abs(s_half - kRoot2) < 3.0 * sigma);
    CHECK(g.at("classical_violation").get<bool>());
    const double p_b = g.at("p_b").get<double>();
    CHECK(std::abs(p_b - sdiwit::bob_success(2.0 * s_half)) < 1e-15);
    CHECK(g.at("secure_improved").get<bool>() == (p_b > 5.0 / 6.0));

    const CommandResult again = run_command(quiet("analyze " + input.string()));
    CHECK(again.output == r.output);

    const CommandResult csv =
        run_command(quiet("analyze " + input.string() + " --format csv"));
    REQUIRE(csv.exit_code == 0);
    const auto lines = split(csv.output, '\n');
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "phi_s,D,D_sigma,V,V_sigma,S_half,S_half_sigma,p_b,"
          "classical_violation,secure_original,secure_improved");
    const auto row = split(lines[1], ',');
    REQUIRE(row.size() == 11);
    CHECK(std::stod(row[5]) == s_half);
    CHECK(row[8] == "1");

    const CommandResult fitted =
        run_command(quiet("analyze " + input.string() + " --estimator sinefit"));
    REQUIRE(fitted.exit_code == 0);
    const json fit_report = json::parse(fitted.output);
    CHECK(fit_report.at("estimator") == "sine-fit");
    const json& fg = fit_report.at("groups")[0];
    CHECK(std::abs(fg.at("v").at("value").get<double>() - kRoot2 / 2) <
          4.0 * fg.at("v").at("sigma").get<double>());
}

TEST_CASE("analyze surfaces data problems as exit 2") {
    TempDir dir;
    const fs::path empty = dir.path / "empty.csv";
    std::ofstream(empty).close();
    CHECK(run_command(quiet("analyze " + empty.string())).exit_code == 2);

    const fs::path sparse = dir.path / "sparse.csv";
    {
        const sdiwit::ScanDataset ds =
            sdiwit::synthesize_counts(kPi / 4, sdiwit::phase_grid(4), 1e4, 5);
        std::ofstream out(sparse, std::ios::binary);
        sdiwit::write_scan(ds, out);
    }
    CHECK(run_command(quiet("analyze " + sparse.string())).exit_code == 2);

    CHECK(run_command(quiet("analyze " + (dir.path / "missing.csv").string())).exit_code == 2);
    CHECK(run_command(quiet("analyze")).exit_code == 1);
}

TEST_CASE("manifests fingerprint the emitted bytes") {
    TempDir dir;
    const fs::path out = dir.path / "scan.csv";
    const CommandResult r =
        run_command(cli() + " scan --steps 4 --out " + out.string() + " 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.empty());

    const std::string payload = slurp(out);
    REQUIRE(!payload.empty());
    const json manifest = json::parse(slurp(dir.path / "scan.csv.manifest.json"));
    CHECK(manifest.at("command") == "scan");
    CHECK(manifest.at("version") == sdiwit::kVersion);
    CHECK(manifest.at("seed").is_null());
    CHECK(manifest.at("parameters").at("steps").get<int>() == 4);
    CHECK(manifest.at("output_digest") ==
          "fnv1a64:" + sdiwit::hex16(sdiwit::fnv1a64(payload)));
}

TEST_CASE("stdout payloads carry their manifest on stderr") {
    TempDir dir;
    const fs::path err = dir.path / "stderr.json";
    const CommandResult r =
        run_command(cli() + " witness --phi-s 0.3 --phi-x 0.4 2>" + err.string());
    REQUIRE(r.exit_code == 0);
    const json manifest = json::parse(slurp(err));
    CHECK(manifest.at("command") == "witness");
    CHECK(manifest.at("parameters").at("phi_s").get<double>() == 0.3);
    CHECK(manifest.at("output_digest") ==
          "fnv1a64:" + sdiwit::hex16(sdiwit::fnv1a64(r.output)));
}
