#pragma once

// Numerical tolerances shared across the library. Every comparison in the
// code and the tests goes through one of these constants.

namespace sdiwit {

// exact algebraic identities evaluated in double precision
inline constexpr double kTolAlgebraic = 1e-12;

// spectral checks: operator squares, unit directions, orthonormality
inline constexpr double kTolSpectral = 1e-10;

// iterative optimization results (see-saw, scans over ansatz families)
inline constexpr double kTolOptimization = 1e-6;

// argument resolution of one-dimensional phase searches
inline constexpr double kTolPhase = 1e-9;

}  // namespace sdiwit
