#pragma once

#include "sdiwit/qcore.hpp"

// Two-port Mach-Zehnder interferometer in the matrix model: input splitter,
// optional path blocker, internal phase phi_x, then a tunable output
// splitter whose internal phase phi_s interpolates between a particle-like
// (phi_s = 0) and a wave-like (phi_s = pi/2) apparatus.

namespace sdiwit {

enum class Block { None, Upper, Lower };

struct InterferometerConfig {
    double phi_x = 0.0;
    double phi_s = 0.0;
    Block block = Block::None;
};

// Squared output amplitudes at the two detectors. A blocker removes one
// path's amplitude without renormalizing, so blocked runs have p0 + p1 = 1/2.
struct PortProbabilities {
    double p0 = 0.0;
    double p1 = 0.0;
    bool normalized = true;
};

struct VisibilityEstimate {
    double port0 = 0.0;
    double port1 = 0.0;
    double mean = 0.0;
};

struct DistinguishabilityEstimate {
    double upper = 0.0;  // which-path contrast with the upper arm blocked
    double lower = 0.0;
    double mean = 0.0;
};

struct DualityEstimate {
    double d_upper = 0.0;
    double d_lower = 0.0;
    double d_mean = 0.0;
    double v_port0 = 0.0;
    double v_port1 = 0.0;
    double v_mean = 0.0;
};

PortProbabilities propagate(const InterferometerConfig& config);

// Fringe visibility (max - min)/(max + min) of each port's output over a
// full phi_x period, located on a scan_points grid and refined.
VisibilityEstimate visibility(double phi_s, int scan_points);

// Which-path contrast |p0 - p1|/(p0 + p1) of the blocked-arm configurations;
// independent of phi_x.
DistinguishabilityEstimate distinguishability(double phi_s);

DualityEstimate duality_estimate(double phi_s, int scan_points);

}  // namespace sdiwit
