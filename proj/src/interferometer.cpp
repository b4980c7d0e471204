#include "sdiwit/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdiwit/optimize.hpp"
#include "sdiwit/tolerances.hpp"

namespace sdiwit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

Mat2 input_splitter() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat2 m;
    m(0, 0) = s;
    m(0, 1) = s * kI;
    m(1, 0) = s * kI;
    m(1, 1) = s;
    return m;
}

Mat2 output_splitter() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat2 m;
    m(0, 0) = s * kI;
    m(0, 1) = -s;
    m(1, 0) = -s;
    m(1, 1) = s * kI;
    return m;
}

Mat2 phase_shift(double phi) {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = std::exp(kI * phi);
    return m;
}

// The upper arm is basis mode 0; blocking it zeroes that component.
Mat2 blocker(Block b) {
    Mat2 m;
    switch (b) {
        case Block::None:
            return Mat2::identity();
        case Block::Upper:
            m(1, 1) = 1.0;
            return m;
        case Block::Lower:
            m(0, 0) = 1.0;
            return m;
    }
    throw std::invalid_argument("unknown block value");
}

}  // namespace

PortProbabilities propagate(const InterferometerConfig& config) {
    if (!std::isfinite(config.phi_x) || !std::isfinite(config.phi_s))
        throw std::invalid_argument("phases must be finite");

    const Mat2 tunable_splitter =
        output_splitter() * phase_shift(config.phi_s) * output_splitter();
    const Mat2 chain =
        tunable_splitter * phase_shift(config.phi_x) * blocker(config.block) * input_splitter();

    // input state is mode 0, so the output amplitudes are the first column
    PortProbabilities out;
    out.p0 = std::norm(chain(0, 0));
    out.p1 = std::norm(chain(1, 0));
    out.normalized = (config.block == Block::None);
    return out;
}

VisibilityEstimate visibility(double phi_s, int scan_points) {
    if (!std::isfinite(phi_s)) throw std::invalid_argument("phi_s must be finite");
    if (scan_points < 8) throw std::invalid_argument("visibility scan needs at least 8 points");

    VisibilityEstimate est;
    double* ports[2] = {&est.port0, &est.port1};
    for (int port = 0; port < 2; ++port) {
        auto intensity = [phi_s, port](double phi_x) {
            const PortProbabilities p = propagate({phi_x, phi_s, Block::None});
            return port == 0 ? p.p0 : p.p1;
        };
        const double hi = periodic_maximum(intensity, kTwoPi, scan_points, kTolPhase).value;
        const double lo = periodic_minimum(intensity, kTwoPi, scan_points, kTolPhase).value;
        if (hi + lo <= 0.0) throw std::runtime_error("no light reaches the scanned port");
        *ports[port] = (hi - lo) / (hi + lo);
    }
    est.mean = 0.5 * (est.port0 + est.port1);
    return est;
}

DistinguishabilityEstimate distinguishability(double phi_s) {
    if (!std::isfinite(phi_s)) throw std::invalid_argument("phi_s must be finite");

    auto contrast = [phi_s](Block b) {
        const PortProbabilities p = propagate({0.0, phi_s, b});
        const double total = p.p0 + p.p1;
        if (total <= 0.0) throw std::runtime_error("blocked configuration transmits no light");
        return std::abs(p.p0 - p.p1) / total;
    };
    DistinguishabilityEstimate est;
    est.upper = contrast(Block::Upper);
    est.lower = contrast(Block::Lower);
    est.mean = 0.5 * (est.upper + est.lower);
    return est;
}

DualityEstimate duality_estimate(double phi_s, int scan_points) {
    const DistinguishabilityEstimate d = distinguishability(phi_s);
    const VisibilityEstimate v = visibility(phi_s, scan_points);
    return {d.upper, d.lower, d.mean, v.port0, v.port1, v.mean};
}

}  // namespace sdiwit
