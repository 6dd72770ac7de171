#pragma once

namespace fraccd {

// Sufficient decrease: F(x+) - F(x) <= -(theta / (2 g(x+))) * ||x+ - x||^2.
// Both coordinate methods satisfy this at every iteration when the 1D
// subproblem is solved globally.
inline bool check_sufficient_decrease(double f_prev, double f_next, double g_next,
                                      double step_sq, double theta, double tol) {
    return f_next - f_prev <= -(theta / (2.0 * g_next)) * step_sq + tol;
}

// The stationarity multiplier of the fractional step is sandwiched:
//   F(x+) <= alpha <= F(x+) + sigma (F(x) - F(x+)) <= sigma F(x0),
// with sigma = (c_max + theta) / theta.
inline bool alpha_sandwich_check(double alpha, double f_next, double f_prev, double f0,
                                 double c_max, double theta, double tol) {
    const double sigma = (c_max + theta) / theta;
    if (alpha < f_next - tol) return false;
    if (alpha > f_next + sigma * (f_prev - f_next) + tol) return false;
    return alpha <= sigma * f0 + tol;
}

}  // namespace fraccd
