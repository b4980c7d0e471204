#include "sdiwit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdiwit {

double gaussian(std::mt19937_64& gen) {
    double u1 = uniform01(gen);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BlochVector random_unit_vector(std::mt19937_64& gen) {
    while (true) {
        const BlochVector v{gaussian(gen), gaussian(gen), gaussian(gen)};
        if (v.norm() > 1e-6) return v.normalized();
    }
}

std::uint64_t poisson_sample(std::mt19937_64& gen, double mean) {
    if (!std::isfinite(mean) || mean < 0.0)
        throw std::invalid_argument("Poisson mean must be finite and non-negative");
    if (mean == 0.0) return 0;

    if (mean < 30.0) {
        const double u = uniform01(gen);
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (p < 1e-320) break;
        }
        return k;
    }

    // Hoermann's PTRS rejection sampler
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    while (true) {
        double u = uniform01(gen) - 0.5;
        double v = uniform01(gen);
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
}

}  // namespace sdiwit
