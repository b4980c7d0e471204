#pragma once

#include <cmath>
#include <stdexcept>

// One-dimensional extremum search for smooth periodic functions: coarse
// uniform grid to locate the bracketing interval, golden-section refinement
// inside it. Flat landscapes resolve to argument 0 so callers get a
// deterministic representative.

namespace sdiwit {

struct Extremum {
    double arg = 0.0;
    double value = 0.0;
};

template <typename F>
Extremum periodic_maximum(F&& f, double period, int grid_points, double arg_tol) {
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("period must be positive and finite");
    if (grid_points < 4) throw std::invalid_argument("need at least 4 grid points");
    if (!(arg_tol > 0.0)) throw std::invalid_argument("argument tolerance must be positive");

    const double h = period / grid_points;
    int best = 0;
    double best_val = f(0.0);
    double worst_val = best_val;
    for (int i = 1; i < grid_points; ++i) {
        const double v = f(i * h);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
        if (v < worst_val) worst_val = v;
    }
    if (best_val - worst_val <= 1e-12 * std::max(1.0, std::abs(best_val)))
        return {0.0, best_val};

    double a = (best - 1) * h;
    double b = (best + 1) * h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > arg_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    double arg = 0.5 * (a + b);
    if (arg < 0.0) arg += period;
    if (arg >= period) arg -= period;
    return {arg, f(arg)};
}

template <typename F>
Extremum periodic_minimum(F&& f, double period, int grid_points, double arg_tol) {
    const Extremum m =
        periodic_maximum([&f](double x) { return -f(x); }, period, grid_points, arg_tol);
    return {m.arg, -m.value};
}

}  // namespace sdiwit
