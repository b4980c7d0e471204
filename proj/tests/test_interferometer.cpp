#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sdiwit/interferometer.hpp"
#include "sdiwit/rng.hpp"
#include "sdiwit/tolerances.hpp"

using namespace sdiwit;

namespace {

constexpr double kPi = std::numbers::pi;

// test-local propagation oracle built from scratch on std::complex pairs
using C = std::complex<double>;
struct Vec2 {
    C a, b;
};

Vec2 oracle_output(double phi_x, double phi_s, Block block) {
    const C i(0, 1);
    const double s = 1.0 / std::sqrt(2.0);
    auto bs1 = [&](Vec2 v) { return Vec2{s * (v.a + i * v.b), s * (i * v.a + v.b)}; };
    auto bs2 = [&](Vec2 v) { return Vec2{s * (i * v.a - v.b), s * (-v.a + i * v.b)}; };
    auto pm = [&](Vec2 v, double phi) { return Vec2{v.a, std::exp(i * phi) * v.b}; };
    auto blocked = [&](Vec2 v) {
        if (block == Block::Upper) return Vec2{0.0, v.b};
        if (block == Block::Lower) return Vec2{v.a, 0.0};
        return v;
    };
    Vec2 v{1.0, 0.0};
    v = bs1(v);
    v = blocked(v);
    v = pm(v, phi_x);
    v = bs2(pm(bs2(v), phi_s));
    return v;
}

}  // namespace

TEST_SUITE("interferometer") {

TEST_CASE("unblocked probabilities match the closed form on random phases") {
    std::mt19937_64 gen(21);
    for (int i = 0; i < 10000; ++i) {
        const double phi_x = (uniform01(gen) - 0.25) * 4.0 * kPi;
        const double phi_s = uniform01(gen) * 2.0 * kPi;
        const PortProbabilities p = propagate({phi_x, phi_s, Block::None});
        const double expected = 0.5 * (1.0 + std::sin(phi_x) * std::sin(phi_s));
        CHECK(std::abs(p.p0 - expected) <= kTolAlgebraic);
        CHECK(std::abs(p.p1 - (1.0 - expected)) <= kTolAlgebraic);
        CHECK(std::abs(p.p0 + p.p1 - 1.0) <= kTolAlgebraic);
        CHECK(p.normalized);
    }
}

TEST_CASE("known special settings") {
    const PortProbabilities bright = propagate({kPi / 2, kPi / 2, Block::None});
    CHECK(std::abs(bright.p0 - 1.0) <= kTolAlgebraic);
    CHECK(std::abs(bright.p1) <= kTolAlgebraic);

    for (double phi_x : {0.0, 0.4, 2.0, 5.5}) {
        const PortProbabilities even = propagate({phi_x, 0.0, Block::None});
        CHECK(std::abs(even.p0 - 0.5) <= kTolAlgebraic);
        CHECK(std::abs(even.p1 - 0.5) <= kTolAlgebraic);
    }
}

TEST_CASE("blocked propagation against the local matrix oracle") {
    const Vec2 expected = oracle_output(0.7, kPi / 3, Block::Upper);
    const PortProbabilities p = propagate({0.7, kPi / 3, Block::Upper});
    CHECK(std::abs(p.p0 - std::norm(expected.a)) <= kTolAlgebraic);
    CHECK(std::abs(p.p1 - std::norm(expected.b)) <= kTolAlgebraic);
    CHECK(!p.normalized);
    CHECK(std::abs(p.p0 + p.p1 - 0.5) <= kTolAlgebraic);

    const double contrast = std::abs(p.p0 - p.p1) / (p.p0 + p.p1);
    CHECK(std::abs(contrast - 0.5) <= kTolAlgebraic);  // cos(pi/3)
}

TEST_CASE("blocked outputs ignore the internal phase") {
    for (Block block : {Block::Upper, Block::Lower}) {
        for (double phi_s : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
            const PortProbabilities ref = propagate({0.0, phi_s, block});
            for (int i = 0; i < 64; ++i) {
                const double phi_x = 2.0 * kPi * i / 64;
                const PortProbabilities p = propagate({phi_x, phi_s, block});
                CHECK(std::abs(p.p0 - ref.p0) <= kTolAlgebraic);
                CHECK(std::abs(p.p1 - ref.p1) <= kTolAlgebraic);
                CHECK(p.p0 + p.p1 <= 0.5 + kTolAlgebraic);
            }
        }
    }
}

TEST_CASE("the two blocked arms split the light oppositely") {
    for (double phi_s : {0.1, 0.7, 1.3}) {
        const PortProbabilities up = propagate({0.0, phi_s, Block::Upper});
        const PortProbabilities low = propagate({0.0, phi_s, Block::Lower});
        CHECK(std::abs(up.p0 - low.p1) <= kTolAlgebraic);
        CHECK(std::abs(up.p1 - low.p0) <= kTolAlgebraic);
    }
}

TEST_CASE("visibility equals sin phi_s") {
    CHECK(std::abs(visibility(kPi / 2, 64).mean - 1.0) <= kTolPhase);
    CHECK(std::abs(visibility(kPi / 4, 64).mean - std::sqrt(0.5)) <= kTolPhase);
    CHECK(std::abs(visibility(0.3, 64).mean - 0.29552020666133955) <= kTolPhase);
    CHECK(std::abs(visibility(0.0, 64).mean) <= kTolPhase);

    const VisibilityEstimate est = visibility(1.1, 64);
    CHECK(std::abs(est.port0 - est.port1) <= kTolPhase);
    CHECK(std::abs(est.mean - 0.5 * (est.port0 + est.port1)) <= kTolAlgebraic);
}

TEST_CASE("distinguishability equals cos phi_s") {
    CHECK(std::abs(distinguishability(0.0).mean - 1.0) <= kTolAlgebraic);
    CHECK(std::abs(distinguishability(kPi / 4).mean - std::sqrt(0.5)) <= kTolAlgebraic);
    CHECK(std::abs(distinguishability(1.0).mean - 0.5403023058681398) <= kTolAlgebraic);

    const DistinguishabilityEstimate est = distinguishability(0.8);
    CHECK(std::abs(est.upper - est.lower) <= kTolAlgebraic);
    CHECK(std::abs(est.mean - 0.5 * (est.upper + est.lower)) <= kTolAlgebraic);
}

TEST_CASE("duality identity and monotonicity on a phi_s grid") {
    double prev_v = -1.0;
    double prev_d = 2.0;
    for (int i = 0; i <= 40; ++i) {
        const double phi_s = (kPi / 2) * i / 40;
        const DualityEstimate est = duality_estimate(phi_s, 64);
        CHECK(std::abs(est.d_mean * est.d_mean + est.v_mean * est.v_mean - 1.0) <= kTolPhase);
        CHECK(std::abs(est.d_mean - 0.5 * (est.d_upper + est.d_lower)) <= kTolAlgebraic);
        CHECK(std::abs(est.v_mean - 0.5 * (est.v_port0 + est.v_port1)) <= kTolAlgebraic);
        CHECK(est.v_mean >= prev_v - kTolPhase);
        CHECK(est.d_mean <= prev_d + kTolPhase);
        prev_v = est.v_mean;
        prev_d = est.d_mean;
    }
}

TEST_CASE("input validation") {
    const double nan = std::nan("");
    CHECK_THROWS_AS(propagate({nan, 0.0, Block::None}), std::invalid_argument);
    CHECK_THROWS_AS(propagate({0.0, nan, Block::None}), std::invalid_argument);
    CHECK_THROWS_AS(visibility(0.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(visibility(nan, 64), std::invalid_argument);
    CHECK_THROWS_AS(distinguishability(nan), std::invalid_argument);
}

}  // TEST_SUITE
