#include "sdiwit/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "sdiwit/format.hpp"
#include "sdiwit/rng.hpp"

namespace sdiwit {

namespace {

constexpr const char* kHeader = "phi_x,phi_s,block,counts_d0,counts_d1";

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ScanParseError("line " + std::to_string(line_no) + ": " + what);
}

double parse_double_field(const std::string& field, std::size_t line_no, const char* name) {
    double value = 0.0;
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, value);
    if (ec != std::errc() || ptr != last)
        fail(line_no, std::string(name) + ": not a decimal number: '" + field + "'");
    if (!std::isfinite(value)) fail(line_no, std::string(name) + ": must be finite");
    return value;
}

std::uint64_t parse_count_field(const std::string& field, std::size_t line_no, const char* name) {
    if (!field.empty() && field[0] == '-')
        fail(line_no, std::string(name) + ": negative counts are not allowed");
    std::uint64_t value = 0;
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, value);
    if (ec != std::errc() || ptr != last || field.empty())
        fail(line_no, std::string(name) + ": not a non-negative integer: '" + field + "'");
    return value;
}

Block parse_block_field(const std::string& field, std::size_t line_no) {
    if (field == "none") return Block::None;
    if (field == "upper") return Block::Upper;
    if (field == "lower") return Block::Lower;
    fail(line_no, "block: expected none, upper or lower, got '" + field + "'");
}

const char* block_name(Block b) {
    switch (b) {
        case Block::None:
            return "none";
        case Block::Upper:
            return "upper";
        case Block::Lower:
            return "lower";
    }
    return "none";
}

std::string strip(const std::string& s) {
    std::size_t first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    std::size_t last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

void apply_comment(const std::string& line, ScanDataset& ds) {
    const std::string body = strip(line.substr(1));
    if (body.rfind("source:", 0) == 0) {
        ds.source = strip(body.substr(7));
    } else if (body.rfind("mu:", 0) == 0) {
        const std::string text = strip(body.substr(3));
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value))
            ds.mean_photon_number = value;
    }
}

EstimateWithError count_contrast(double c0, double c1, const char* context) {
    const double total = c0 + c1;
    if (total <= 0.0)
        throw std::invalid_argument(std::string("zero total counts in ") + context);
    return {std::abs(c0 - c1) / total, poisson_ratio_sigma(c0, c1)};
}

// least-squares fit of counts against {1, cos(phi_x), sin(phi_x)} with a
// sandwich covariance under Poisson per-setting variances
EstimateWithError sine_fit_visibility(const std::vector<const ScanRecord*>& rows, int port) {
    double normal[3][3] = {};
    double rhs[3] = {};
    double middle[3][3] = {};
    for (const ScanRecord* r : rows) {
        const double y = static_cast<double>(port == 0 ? r->counts_d0 : r->counts_d1);
        const double f[3] = {1.0, std::cos(r->phi_x), std::sin(r->phi_x)};
        const double var = std::max(y, 1.0);
        for (int i = 0; i < 3; ++i) {
            rhs[i] += f[i] * y;
            for (int j = 0; j < 3; ++j) {
                normal[i][j] += f[i] * f[j];
                middle[i][j] += var * f[i] * f[j];
            }
        }
    }

    // invert the normal matrix by Gauss-Jordan elimination
    double aug[3][6] = {};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) aug[i][j] = normal[i][j];
        aug[i][3 + i] = 1.0;
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
        if (std::abs(aug[pivot][col]) < 1e-9)
            throw std::invalid_argument("phase design too degenerate for a sinusoidal fit");
        if (pivot != col)
            for (int j = 0; j < 6; ++j) std::swap(aug[pivot][j], aug[col][j]);
        const double scale = aug[col][col];
        for (int j = 0; j < 6; ++j) aug[col][j] /= scale;
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double factor = aug[r][col];
            for (int j = 0; j < 6; ++j) aug[r][j] -= factor * aug[col][j];
        }
    }
    double inv[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) inv[i][j] = aug[i][3 + j];

    double theta[3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) theta[i] += inv[i][j] * rhs[j];

    double cov[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) acc += inv[i][k] * middle[k][l] * inv[l][j];
            cov[i][j] = acc;
        }

    const double mean_level = theta[0];
    if (!(mean_level > 0.0))
        throw std::invalid_argument("fitted mean intensity is not positive");
    const double amplitude = std::hypot(theta[1], theta[2]);
    if (amplitude < 1e-12 * mean_level) {
        // flat fringe: direction of the amplitude is undefined, bound sigma
        // by both quadrature components
        return {0.0, std::sqrt(std::max(0.0, cov[1][1] + cov[2][2])) / mean_level};
    }
    const double g[3] = {-amplitude / (mean_level * mean_level),
                         theta[1] / (mean_level * amplitude),
                         theta[2] / (mean_level * amplitude)};
    double sigma2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sigma2 += g[i] * cov[i][j] * g[j];
    return {amplitude / mean_level, std::sqrt(std::max(0.0, sigma2))};
}

EstimateWithError port_visibility(const std::vector<const ScanRecord*>& rows, int port,
                                  ExtremumMode mode) {
    if (mode == ExtremumMode::SineFit) return sine_fit_visibility(rows, port);
    double hi = 0.0;
    double lo = 0.0;
    bool first = true;
    for (const ScanRecord* r : rows) {
        const double c = static_cast<double>(port == 0 ? r->counts_d0 : r->counts_d1);
        if (first) {
            hi = lo = c;
            first = false;
        } else {
            hi = std::max(hi, c);
            lo = std::min(lo, c);
        }
    }
    return count_contrast(hi, lo, "the fringe extrema");
}

}  // namespace

const char* to_string(ExtremumMode mode) {
    return mode == ExtremumMode::SineFit ? "sine-fit" : "count-extrema";
}

ScanDataset parse_scan(std::istream& in) {
    ScanDataset ds;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            apply_comment(line, ds);
            continue;
        }
        if (!header_seen) {
            if (line != kHeader)
                fail(line_no,
                     "expected header '" + std::string(kHeader) + "', got '" + line + "'");
            header_seen = true;
            continue;
        }
        std::array<std::string, 5> fields;
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string token = line.substr(start, comma - start);
            if (count < 5) fields[count] = token;
            ++count;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (count != 5)
            fail(line_no,
                 "expected 5 comma-separated fields, got " + std::to_string(count));
        ScanRecord rec;
        rec.phi_x = parse_double_field(fields[0], line_no, "phi_x");
        rec.phi_s = parse_double_field(fields[1], line_no, "phi_s");
        rec.block = parse_block_field(fields[2], line_no);
        rec.counts_d0 = parse_count_field(fields[3], line_no, "counts_d0");
        rec.counts_d1 = parse_count_field(fields[4], line_no, "counts_d1");
        ds.records.push_back(rec);
    }
    if (!header_seen) throw ScanParseError("empty input: missing header row");
    return ds;
}

ScanDataset parse_scan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScanParseError("cannot open file: " + path);
    return parse_scan(in);
}

void write_scan(const ScanDataset& ds, std::ostream& out) {
    if (!ds.source.empty()) out << "# source: " << ds.source << "\n";
    if (ds.mean_photon_number)
        out << "# mu: " << format_double(*ds.mean_photon_number) << "\n";
    out << kHeader << "\n";
    for (const ScanRecord& r : ds.records)
        out << format_double(r.phi_x) << ',' << format_double(r.phi_s) << ','
            << block_name(r.block) << ',' << format_u64(r.counts_d0) << ','
            << format_u64(r.counts_d1) << "\n";
}

std::string to_csv(const ScanDataset& ds) {
    std::ostringstream out;
    write_scan(ds, out);
    return out.str();
}

double poisson_ratio_sigma(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("counts must be finite and non-negative");
    const double total = a + b;
    if (total <= 0.0) throw std::invalid_argument("sigma undefined for zero total counts");
    return 2.0 * std::sqrt(a * b * total) / (total * total);
}

DualityWithError estimate_duality(const ScanDataset& ds, ExtremumMode mode) {
    if (ds.records.empty()) throw std::invalid_argument("dataset is empty");
    const double phi_s = ds.records.front().phi_s;
    for (const ScanRecord& r : ds.records)
        if (r.phi_s != phi_s)
            throw std::invalid_argument(
                "dataset mixes phi_s groups; select one group before estimating");

    std::vector<const ScanRecord*> unblocked;
    std::set<double> phases;
    double upper_d0 = 0.0, upper_d1 = 0.0, lower_d0 = 0.0, lower_d1 = 0.0;
    bool saw_upper = false, saw_lower = false;
    for (const ScanRecord& r : ds.records) {
        switch (r.block) {
            case Block::None:
                unblocked.push_back(&r);
                phases.insert(r.phi_x);
                break;
            case Block::Upper:
                saw_upper = true;
                upper_d0 += static_cast<double>(r.counts_d0);
                upper_d1 += static_cast<double>(r.counts_d1);
                break;
            case Block::Lower:
                saw_lower = true;
                lower_d0 += static_cast<double>(r.counts_d0);
                lower_d1 += static_cast<double>(r.counts_d1);
                break;
        }
    }
    if (unblocked.empty())
        throw std::invalid_argument("no unblocked records to estimate visibility from");
    if (phases.size() < 8)
        throw std::invalid_argument("need at least 8 distinct phi_x settings in the unblocked scan");
    if (!saw_upper || !saw_lower)
        throw std::invalid_argument("missing blocked group: both upper and lower runs are required");

    DualityWithError out;
    out.mode = mode;

    const EstimateWithError d_upper = count_contrast(upper_d0, upper_d1, "the upper-blocked group");
    const EstimateWithError d_lower = count_contrast(lower_d0, lower_d1, "the lower-blocked group");
    out.d.value = 0.5 * (d_upper.value + d_lower.value);
    out.d.sigma = 0.5 * std::hypot(d_upper.sigma, d_lower.sigma);

    const EstimateWithError v0 = port_visibility(unblocked, 0, mode);
    const EstimateWithError v1 = port_visibility(unblocked, 1, mode);
    out.v.value = 0.5 * (v0.value + v1.value);
    out.v.sigma = 0.5 * std::hypot(v0.sigma, v1.sigma);
    return out;
}

ScanDataset synthesize_counts(double phi_s, std::span<const double> phi_x_grid, double mean_total,
                              std::uint64_t seed) {
    if (!std::isfinite(phi_s)) throw std::invalid_argument("phi_s must be finite");
    if (phi_x_grid.empty()) throw std::invalid_argument("phase grid must not be empty");
    if (!(mean_total > 0.0) || !std::isfinite(mean_total))
        throw std::invalid_argument("mean_total must be positive and finite");
    for (double phi : phi_x_grid)
        if (!std::isfinite(phi)) throw std::invalid_argument("grid phases must be finite");

    std::mt19937_64 gen(seed);
    ScanDataset ds;
    ds.source = "synthetic seed=" + std::to_string(seed) + " mean_total=" + format_double(mean_total);
    static constexpr Block kBlocks[] = {Block::None, Block::Upper, Block::Lower};
    for (double phi_x : phi_x_grid) {
        for (Block block : kBlocks) {
            const PortProbabilities p = propagate({phi_x, phi_s, block});
            ScanRecord rec;
            rec.phi_x = phi_x;
            rec.phi_s = phi_s;
            rec.block = block;
            rec.counts_d0 = poisson_sample(gen, mean_total * p.p0);
            rec.counts_d1 = poisson_sample(gen, mean_total * p.p1);
            ds.records.push_back(rec);
        }
    }
    return ds;
}

std::vector<double> phase_grid(int settings) {
    if (settings < 1) throw std::invalid_argument("need at least one setting");
    std::vector<double> grid(settings);
    for (int i = 0; i < settings; ++i)
        grid[i] = 2.0 * std::numbers::pi * i / settings;
    return grid;
}

std::vector<double> distinct_phi_s(const ScanDataset& ds) {
    std::set<double> values;
    for (const ScanRecord& r : ds.records) values.insert(r.phi_s);
    return {values.begin(), values.end()};
}

ScanDataset select_phi_s(const ScanDataset& ds, double phi_s) {
    ScanDataset out;
    out.source = ds.source;
    out.mean_photon_number = ds.mean_photon_number;
    for (const ScanRecord& r : ds.records)
        if (r.phi_s == phi_s) out.records.push_back(r);
    return out;
}

}  // namespace sdiwit
