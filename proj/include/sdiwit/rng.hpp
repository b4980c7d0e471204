#pragma once

#include <cstdint>
#include <random>

#include "sdiwit/qcore.hpp"

// Deterministic sampling helpers. Distribution shapes are implemented here
// instead of using std::*_distribution because the standard leaves those
// algorithms unspecified and results must be reproducible across toolchains.

namespace sdiwit {

// 53-bit draw in [0, 1)
inline double uniform01(std::mt19937_64& gen) { return (gen() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& gen);

BlochVector random_unit_vector(std::mt19937_64& gen);

// inverse-transform recurrence for small means, transformed rejection (PTRS)
// for large ones
std::uint64_t poisson_sample(std::mt19937_64& gen, double mean);

}  // namespace sdiwit
