#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace fraccd {

// Deterministic scan-and-zoom minimizer used as the independent reference for
// the closed-form 1D solvers: coarse scan of n_grid points, then n_refine
// rounds that shrink the window tenfold around the incumbent. Infinite bounds
// are compactified to [-radius, radius].
template <class Objective>
inline std::pair<double, double> grid_oracle_1d(Objective&& objective, double c1, double c2,
                                                int n_grid = 2001, int n_refine = 3,
                                                double radius = 1e3) {
    if (!std::isfinite(c1)) c1 = -radius;
    if (!std::isfinite(c2)) c2 = radius;
    double lo = c1, hi = c2;
    double best_eta = lo;
    double best_val = std::numeric_limits<double>::infinity();
    for (int round = 0; round <= n_refine; ++round) {
        const double step = (hi - lo) / (n_grid - 1);
        for (int k = 0; k < n_grid; ++k) {
            const double e = lo + step * k;
            const double v = objective(e);
            if (v < best_val) {
                best_val = v;
                best_eta = e;
            }
        }
        const double width = (hi - lo) / 10.0;
        lo = std::max(c1, best_eta - width / 2.0);
        hi = std::min(c2, best_eta + width / 2.0);
        if (hi <= lo) break;
    }
    return {best_eta, best_val};
}

}  // namespace fraccd
