#include "sdiwit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdiwit/optimize.hpp"
#include "sdiwit/tolerances.hpp"

namespace sdiwit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_bit(int v, const char* name) {
    if (v != 0 && v != 1) throw std::invalid_argument(std::string(name) + " must be 0 or 1");
}

double matrix_distance(const Mat2& a, const Mat2& b) {
    const Mat2 diff = a - b;
    double worst = 0.0;
    for (const Complex& v : diff.e) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace

double witness_coefficient(int a0, int a1, int y) {
    check_bit(a0, "a0");
    check_bit(a1, "a1");
    check_bit(y, "y");
    return 1.0 - 2.0 * (y == 0 ? a0 : a1);
}

PreparationSet::PreparationSet(QubitState s00, QubitState s01, QubitState s10, QubitState s11)
    : states_{std::move(s00), std::move(s01), std::move(s10), std::move(s11)} {}

const QubitState& PreparationSet::at(int a0, int a1) const {
    check_bit(a0, "a0");
    check_bit(a1, "a1");
    return states_[2 * a0 + a1];
}

bool PreparationSet::parity_oblivious(double tol) const {
    const Mat2 even = (at(0, 0).rho() + at(1, 1).rho()).scaled(Complex(0.5, 0));
    const Mat2 odd = (at(0, 1).rho() + at(1, 0).rho()).scaled(Complex(0.5, 0));
    return matrix_distance(even, odd) <= tol;
}

PreparationSet bb84_preparations() {
    return PreparationSet(state_from_bloch({0, 0, 1}), state_from_bloch({-1, 0, 0}),
                          state_from_bloch({1, 0, 0}), state_from_bloch({0, 0, -1}));
}

MeasurementPair tunable_measurements(double phi_s, double phi_x) {
    if (!std::isfinite(phi_s) || !std::isfinite(phi_x))
        throw std::invalid_argument("phases must be finite");
    auto direction = [phi_s](double phi) {
        return BlochVector{std::sin(phi_s) * std::cos(phi), std::sin(phi_s) * std::sin(phi),
                           std::cos(phi_s)};
    };
    return MeasurementPair{BinaryObservable::from_direction(direction(phi_x)),
                           BinaryObservable::from_direction(direction(phi_x + std::numbers::pi)),
                           phi_s, phi_x};
}

void CorrelatorTable::set(int a0, int a1, int y, double value) {
    check_bit(a0, "a0");
    check_bit(a1, "a1");
    check_bit(y, "y");
    if (!(value >= -kTolAlgebraic && value <= 1.0 + kTolAlgebraic))
        throw std::invalid_argument("correlator entries are probabilities in [0,1]");
    const int idx = 4 * a0 + 2 * a1 + y;
    values_[idx] = std::min(1.0, std::max(0.0, value));
    present_[idx] = true;
}

double CorrelatorTable::at(int a0, int a1, int y) const {
    check_bit(a0, "a0");
    check_bit(a1, "a1");
    check_bit(y, "y");
    const int idx = 4 * a0 + 2 * a1 + y;
    if (!present_[idx]) throw std::logic_error("correlator entry has not been set");
    return values_[idx];
}

bool CorrelatorTable::complete() const {
    for (bool p : present_)
        if (!p) return false;
    return true;
}

CorrelatorTable correlator_table(const PreparationSet& prep, const MeasurementPair& meas) {
    CorrelatorTable table;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int y = 0; y < 2; ++y)
                table.set(a0, a1, y, outcome_prob(prep.at(a0, a1), meas.at(y), 0));
    return table;
}

double witness_value(const CorrelatorTable& table) {
    if (!table.complete()) throw std::invalid_argument("correlator table is incomplete");
    double s = 0.0;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int y = 0; y < 2; ++y)
                s += witness_coefficient(a0, a1, y) * table.at(a0, a1, y);
    return s;
}

double bob_success(double s_value) {
    if (!(s_value >= -4.0 - kTolAlgebraic && s_value <= 4.0 + kTolAlgebraic))
        throw std::invalid_argument("witness value must lie in [-4, 4]");
    return (s_value + 4.0) / 8.0;
}

PerConfigDuality per_config_duality(const PreparationSet& prep, double phi_s) {
    if (!std::isfinite(phi_s)) throw std::invalid_argument("phi_s must be finite");

    PerConfigDuality out;
    constexpr int kDriftProbes = 16;
    for (int a = 0; a < 2; ++a) {
        for (int y = 0; y < 2; ++y) {
            double lo = 0.0, hi = 0.0;
            for (int i = 0; i < kDriftProbes; ++i) {
                const double phi_x = kTwoPi * i / kDriftProbes;
                const MeasurementPair meas = tunable_measurements(phi_s, phi_x);
                const double val = 2.0 * outcome_prob(prep.at(a, a), meas.at(y), a) - 1.0;
                if (i == 0) {
                    lo = hi = val;
                } else {
                    lo = std::min(lo, val);
                    hi = std::max(hi, val);
                }
            }
            if (hi - lo > kTolPhase)
                throw std::invalid_argument(
                    "path contrast varies with phi_x; equal-bit inputs are not particle-like");
            out.d[a][y] = hi;
        }
    }
    for (int a0 = 0; a0 < 2; ++a0) {
        const int a1 = 1 - a0;
        for (int y = 0; y < 2; ++y) {
            for (int b = 0; b < 2; ++b) {
                auto prob = [&](double phi_x) {
                    return outcome_prob(prep.at(a0, a1), tunable_measurements(phi_s, phi_x).at(y),
                                        b);
                };
                const Extremum peak = periodic_maximum(prob, kTwoPi, 256, kTolPhase);
                out.v[a0][y][b] = 2.0 * peak.value - 1.0;
            }
        }
    }
    return out;
}

WitnessReport duality_witness_max(const PreparationSet& prep, double phi_s) {
    if (!std::isfinite(phi_s)) throw std::invalid_argument("phi_s must be finite");

    auto s_of_phase = [&](double phi_x) {
        return witness_value(correlator_table(prep, tunable_measurements(phi_s, phi_x)));
    };
    const Extremum peak = periodic_maximum(s_of_phase, kTwoPi, 256, kTolPhase);

    WitnessReport report;
    report.duality = per_config_duality(prep, phi_s);
    report.s_value = peak.value;
    report.p_b = bob_success(peak.value);
    report.phi_x_star = peak.arg;

    // the maximum must split into path contrasts plus fringe amplitudes at
    // the guessed bit b = a_y
    double decomposition = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int y = 0; y < 2; ++y) decomposition += 0.5 * report.duality.d[a][y];
    for (int a0 = 0; a0 < 2; ++a0) {
        const int a1 = 1 - a0;
        decomposition += 0.5 * report.duality.v[a0][0][a0];
        decomposition += 0.5 * report.duality.v[a0][1][a1];
    }
    if (std::abs(decomposition - report.s_value) > kTolOptimization)
        throw std::runtime_error("contrast/visibility decomposition does not match the maximum");
    return report;
}

double symmetric_witness(double d, double v) {
    if (!(d >= -kTolAlgebraic && d <= 1.0 + kTolAlgebraic) ||
        !(v >= -kTolAlgebraic && v <= 1.0 + kTolAlgebraic))
        throw std::invalid_argument("contrast and visibility must lie in [0, 1]");
    return 2.0 * (d + v);
}

}  // namespace sdiwit
