#pragma once

#include <array>

#include "sdiwit/qcore.hpp"

// The (4,2,2) prepare-and-measure game behind the interferometric security
// witness: four two-bit preparations, two dichotomic measurements, and the
// linear correlator combination S whose classical ceiling is 2.

namespace sdiwit {

inline constexpr int kNumPreparations = 4;
inline constexpr int kNumMeasurements = 2;
inline constexpr int kNumOutcomes = 2;
inline constexpr int kMessageDimension = 2;

// coefficient of E(a0,a1,y) in S; equals 1 - 2*a_y, so always +-1
double witness_coefficient(int a0, int a1, int y);

class PreparationSet {
public:
    PreparationSet(QubitState s00, QubitState s01, QubitState s10, QubitState s11);
    const QubitState& at(int a0, int a1) const;
    // both parity averages (over a1 for fixed a0 mixed over a0, and the
    // transposed pairing) coincide within tol
    bool parity_oblivious(double tol) const;

private:
    std::array<QubitState, 4> states_;
};

// |0>, |->, |+>, |1> for inputs 00, 01, 10, 11
PreparationSet bb84_preparations();

// Bob's interpolating observables: m0 points along
// (sin phi_s cos phi_x, sin phi_s sin phi_x, cos phi_s), m1 is m0 with
// phi_x advanced by pi.
struct MeasurementPair {
    BinaryObservable m0;
    BinaryObservable m1;
    double phi_s = 0.0;
    double phi_x = 0.0;

    const BinaryObservable& at(int y) const { return y == 0 ? m0 : m1; }
};

MeasurementPair tunable_measurements(double phi_s, double phi_x);

// The eight correlators E(a0,a1,y) = P(b=0) - P(b=1) of one experiment.
class CorrelatorTable {
public:
    void set(int a0, int a1, int y, double value);
    double at(int a0, int a1, int y) const;
    bool complete() const;

private:
    std::array<double, 8> values_{};
    std::array<bool, 8> present_{};
};

CorrelatorTable correlator_table(const PreparationSet& prep, const MeasurementPair& meas);

double witness_value(const CorrelatorTable& table);

// average success probability of guessing b = a_y: (S + 4)/8
double bob_success(double s_value);

// Per-configuration interferometric quantities of a preparation set at a
// fixed phi_s. Equal-bit inputs feed the which-path contrasts, unequal-bit
// inputs the fringe visibilities.
struct PerConfigDuality {
    // d[a][y]: contrast 2*P(b=a | input (a,a), measurement y) - 1,
    // independent of phi_x
    std::array<std::array<double, 2>, 2> d{};
    // v[a0][y][b]: fringe amplitude max_phi_x 2*P(b | input (a0, 1-a0)) - 1
    std::array<std::array<std::array<double, 2>, 2>, 2> v{};
};

PerConfigDuality per_config_duality(const PreparationSet& prep, double phi_s);

struct WitnessReport {
    double s_value = 0.0;
    double p_b = 0.0;
    double phi_x_star = 0.0;  // smallest non-negative maximizing phase
    PerConfigDuality duality;
};

// Maximize S over phi_x at fixed phi_s and cross-check the result against
// the per-configuration contrast/visibility decomposition of S.
WitnessReport duality_witness_max(const PreparationSet& prep, double phi_s);

// S restricted to the symmetric strategy family: 2*(d + v)
double symmetric_witness(double d, double v);

}  // namespace sdiwit
