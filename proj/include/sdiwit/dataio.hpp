#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdiwit/interferometer.hpp"

// Photon-count scan data: CSV ingestion, duality estimation with Poisson
// error propagation, and model-driven synthesis for end-to-end tests.

namespace sdiwit {

struct ScanRecord {
    double phi_x = 0.0;
    double phi_s = 0.0;
    Block block = Block::None;
    std::uint64_t counts_d0 = 0;
    std::uint64_t counts_d1 = 0;
};

struct ScanDataset {
    std::vector<ScanRecord> records;
    std::string source;                        // free-form provenance label
    std::optional<double> mean_photon_number;  // per-pulse mu when known
};

class ScanParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV schema: header `phi_x,phi_s,block,counts_d0,counts_d1`, block one of
// none/upper/lower, `#` lines are comments (`# source:` and `# mu:` are
// recognized metadata).
ScanDataset parse_scan(std::istream& in);
ScanDataset parse_scan_file(const std::string& path);
void write_scan(const ScanDataset& ds, std::ostream& out);
std::string to_csv(const ScanDataset& ds);

struct EstimateWithError {
    double value = 0.0;
    double sigma = 0.0;
};

// how fringe extrema are extracted from unblocked scans
enum class ExtremumMode { CountExtrema, SineFit };
const char* to_string(ExtremumMode mode);

struct DualityWithError {
    EstimateWithError d;
    EstimateWithError v;
    ExtremumMode mode = ExtremumMode::CountExtrema;
};

// standard deviation of r = (a-b)/(a+b) for independent Poisson counts
double poisson_ratio_sigma(double a, double b);

// Single-phi_s dataset -> (D, V) with propagated sigmas. V per port from the
// unblocked fringe, D per blocked arm from aggregated counts, both averaged
// with quadrature errors.
DualityWithError estimate_duality(const ScanDataset& ds,
                                  ExtremumMode mode = ExtremumMode::CountExtrema);

// Poisson counts for every (phi_x, block) setting at the model's output
// rates; deterministic for a given seed.
ScanDataset synthesize_counts(double phi_s, std::span<const double> phi_x_grid, double mean_total,
                              std::uint64_t seed);

// uniform grid of settings on [0, 2*pi)
std::vector<double> phase_grid(int settings);

// distinct phi_s values in ascending order
std::vector<double> distinct_phi_s(const ScanDataset& ds);
ScanDataset select_phi_s(const ScanDataset& ds, double phi_s);

}  // namespace sdiwit
