#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sdiwit/witness.hpp"

// Certification layer: exact classical ceiling by enumeration, quantum
// ceiling by alternating optimization, eavesdropper analysis and the two
// security criteria.

namespace sdiwit {

// Thresholds on Bob's success probability and their images on the D+V
// axis through threshold_dv = 4*threshold_pb - 2. The improved threshold
// is the exact fixed point 5/6 of improved_eve_cap; 0.833 and 1.332 are
// its commonly quoted roundings.
inline constexpr double kOriginalPbThreshold = 0.8415;
inline constexpr double kImprovedPbThreshold = 5.0 / 6.0;
inline constexpr double kOriginalDvThreshold = 1.366;
inline constexpr double kImprovedDvThreshold = 4.0 / 3.0;

struct ClassicalStrategy {
    // message bit sent for input (a0,a1), indexed 2*a0 + a1
    std::array<int, 4> encoder{};
    // outcome announced for (message, y), indexed 2*message + y
    std::array<int, 4> decoder{};
};

CorrelatorTable strategy_table(const ClassicalStrategy& strategy);
double strategy_witness(const ClassicalStrategy& strategy);

struct ClassicalCertificate {
    double max_s = 0.0;
    ClassicalStrategy best;
    int strategies_checked = 0;
};

// all 16 encoders x 16 decoders
ClassicalCertificate classical_maximum();

struct QuantumAnsatz {
    std::array<BlochVector, 4> preparations{};  // indexed 2*a0 + a1
    std::array<BlochVector, 2> measurements{};
};

double witness_of_ansatz(const QuantumAnsatz& ansatz);
std::array<BlochVector, 4> optimal_preparations_for(const std::array<BlochVector, 2>& measurements);
std::array<BlochVector, 2> optimal_measurements_for(const std::array<BlochVector, 4>& preparations);
PreparationSet preparations_from_ansatz(const QuantumAnsatz& ansatz);

struct SeeSawResult {
    double s_value = 0.0;
    QuantumAnsatz ansatz;
    std::vector<double> trace;           // witness after each sweep of the winning restart
    std::vector<double> restart_values;  // converged witness of every restart
};

// Alternating ascent: closed-form best preparations for fixed measurements,
// then closed-form best measurements, repeated to convergence; best over
// seeded random restarts.
SeeSawResult quantum_maximum(std::uint64_t seed, int restarts);

// Optimal average probability that an intercepting measurement (chosen with
// knowledge of y) guesses the addressed bit, via two-state discrimination of
// the bit-conditioned mixtures.
double eve_success(const PreparationSet& prep);

// Upper bound (3 + sqrt(1 - 2(2 p_b - 1)^2))/4 on the interceptor's success
// compatible with Bob succeeding at rate p_b.
double improved_eve_cap(double p_b);

// sum_i (n . m_i)^2 for an orthonormal triad; bounded by |n|^2 for qubit
// strategies
double hyperbit_check(const BlochVector& n, const std::array<BlochVector, 3>& triad);

struct SecurityVerdict {
    double p_b = 0.0;
    double p_e_cap_original = 0.0;
    double p_e_cap_improved = 0.0;
    bool secure_original = false;
    bool secure_improved = false;
    double dv_threshold_original = 0.0;
    double dv_threshold_improved = 0.0;
};

SecurityVerdict security_verdict(double p_b);

}  // namespace sdiwit
