#include "sdiwit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdiwit/rng.hpp"
#include "sdiwit/tolerances.hpp"

namespace sdiwit {

namespace {

void check_bit_table(const std::array<int, 4>& table, const char* name) {
    for (int v : table)
        if (v != 0 && v != 1) throw std::invalid_argument(std::string(name) + " must map to bits");
}

BlochVector aligned_or_default(const BlochVector& gradient) {
    // a vanishing gradient leaves the direction free; fix one for determinism
    if (gradient.norm() < 1e-15) return {0.0, 0.0, 1.0};
    return gradient.normalized();
}

}  // namespace

CorrelatorTable strategy_table(const ClassicalStrategy& strategy) {
    check_bit_table(strategy.encoder, "encoder");
    check_bit_table(strategy.decoder, "decoder");
    CorrelatorTable table;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int y = 0; y < 2; ++y) {
                const int message = strategy.encoder[2 * a0 + a1];
                const int b = strategy.decoder[2 * message + y];
                table.set(a0, a1, y, b == 0 ? 1.0 : 0.0);
            }
    return table;
}

double strategy_witness(const ClassicalStrategy& strategy) {
    return witness_value(strategy_table(strategy));
}

ClassicalCertificate classical_maximum() {
    ClassicalCertificate cert;
    cert.max_s = -8.0;
    for (int enc = 0; enc < 16; ++enc) {
        for (int dec = 0; dec < 16; ++dec) {
            ClassicalStrategy s;
            for (int i = 0; i < 4; ++i) {
                s.encoder[i] = (enc >> i) & 1;
                s.decoder[i] = (dec >> i) & 1;
            }
            const double value = strategy_witness(s);
            ++cert.strategies_checked;
            if (value > cert.max_s) {
                cert.max_s = value;
                cert.best = s;
            }
        }
    }
    return cert;
}

double witness_of_ansatz(const QuantumAnsatz& ansatz) {
    double s = 0.0;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int y = 0; y < 2; ++y) {
                const double corr =
                    ansatz.preparations[2 * a0 + a1].dot(ansatz.measurements[y]);
                // E = (1 + n.m)/2 for outcome 0
                s += witness_coefficient(a0, a1, y) * 0.5 * (1.0 + corr);
            }
    return s;
}

std::array<BlochVector, 4> optimal_preparations_for(
    const std::array<BlochVector, 2>& measurements) {
    std::array<BlochVector, 4> prep{};
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1) {
            BlochVector gradient{};
            for (int y = 0; y < 2; ++y)
                gradient = gradient + measurements[y].scaled(witness_coefficient(a0, a1, y));
            prep[2 * a0 + a1] = aligned_or_default(gradient);
        }
    return prep;
}

std::array<BlochVector, 2> optimal_measurements_for(
    const std::array<BlochVector, 4>& preparations) {
    std::array<BlochVector, 2> meas{};
    for (int y = 0; y < 2; ++y) {
        BlochVector gradient{};
        for (int a0 = 0; a0 < 2; ++a0)
            for (int a1 = 0; a1 < 2; ++a1)
                gradient =
                    gradient + preparations[2 * a0 + a1].scaled(witness_coefficient(a0, a1, y));
        meas[y] = aligned_or_default(gradient);
    }
    return meas;
}

PreparationSet preparations_from_ansatz(const QuantumAnsatz& ansatz) {
    return PreparationSet(
        state_from_bloch(ansatz.preparations[0]), state_from_bloch(ansatz.preparations[1]),
        state_from_bloch(ansatz.preparations[2]), state_from_bloch(ansatz.preparations[3]));
}

SeeSawResult quantum_maximum(std::uint64_t seed, int restarts) {
    if (seed < 1) throw std::invalid_argument("seed must be at least 1");
    if (restarts < 1) throw std::invalid_argument("need at least one restart");

    constexpr int kMaxSweeps = 500;
    constexpr double kConvergence = 1e-10;

    std::mt19937_64 gen(seed);
    SeeSawResult result;
    result.s_value = -8.0;
    for (int r = 0; r < restarts; ++r) {
        QuantumAnsatz ansatz;
        ansatz.measurements = {random_unit_vector(gen), random_unit_vector(gen)};
        ansatz.preparations = optimal_preparations_for(ansatz.measurements);

        std::vector<double> trace;
        double value = witness_of_ansatz(ansatz);
        trace.push_back(value);
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            ansatz.measurements = optimal_measurements_for(ansatz.preparations);
            ansatz.preparations = optimal_preparations_for(ansatz.measurements);
            const double next = witness_of_ansatz(ansatz);
            trace.push_back(next);
            if (std::abs(next - value) <= kConvergence) {
                value = next;
                break;
            }
            value = next;
        }
        result.restart_values.push_back(value);
        if (value > result.s_value) {
            result.s_value = value;
            result.ansatz = ansatz;
            result.trace = std::move(trace);
        }
    }
    return result;
}

double eve_success(const PreparationSet& prep) {
    // bit a0: mixtures over the unaddressed bit
    const QubitState first0 = equal_mixture(prep.at(0, 0), prep.at(0, 1));
    const QubitState first1 = equal_mixture(prep.at(1, 0), prep.at(1, 1));
    // bit a1
    const QubitState second0 = equal_mixture(prep.at(0, 0), prep.at(1, 0));
    const QubitState second1 = equal_mixture(prep.at(0, 1), prep.at(1, 1));
    return 0.5 * (helstrom(first0, first1) + helstrom(second0, second1));
}

double improved_eve_cap(double p_b) {
    if (!std::isfinite(p_b)) throw std::invalid_argument("p_b must be finite");
    const double t = 2.0 * p_b - 1.0;
    const double limit = std::sqrt(0.5) + kTolAlgebraic;
    if (std::abs(t) > limit)
        throw std::domain_error("p_b outside the reachable range of qubit strategies");
    const double radicand = std::max(0.0, 1.0 - 2.0 * t * t);
    return 0.25 * (3.0 + std::sqrt(radicand));
}

double hyperbit_check(const BlochVector& n, const std::array<BlochVector, 3>& triad) {
    if (n.norm() > 1.0 + kTolAlgebraic)
        throw std::invalid_argument("test vector must lie in the unit ball");
    for (int i = 0; i < 3; ++i) {
        if (std::abs(triad[i].norm() - 1.0) > kTolSpectral)
            throw std::invalid_argument("triad directions must be unit vectors");
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(triad[i].dot(triad[j])) > kTolSpectral)
                throw std::invalid_argument("triad directions must be mutually orthogonal");
    }
    double sum = 0.0;
    for (const BlochVector& m : triad) {
        const double e = n.dot(m);
        sum += e * e;
    }
    return sum;
}

SecurityVerdict security_verdict(double p_b) {
    if (!(p_b >= 0.0 && p_b <= 1.0))
        throw std::invalid_argument("p_b must be a probability in [0, 1]");
    SecurityVerdict verdict;
    verdict.p_b = p_b;
    verdict.p_e_cap_original = kOriginalPbThreshold;
    // clamp into the cap's domain so extreme inputs still get a verdict
    const double t = std::min(std::abs(2.0 * p_b - 1.0), std::sqrt(0.5));
    verdict.p_e_cap_improved = 0.25 * (3.0 + std::sqrt(std::max(0.0, 1.0 - 2.0 * t * t)));
    verdict.secure_original = p_b > kOriginalPbThreshold;
    verdict.secure_improved = p_b > kImprovedPbThreshold;
    verdict.dv_threshold_original = kOriginalDvThreshold;
    verdict.dv_threshold_improved = kImprovedDvThreshold;
    return verdict;
}

}  // namespace sdiwit
