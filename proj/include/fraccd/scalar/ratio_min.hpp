#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fraccd/errors.hpp"
#include "fraccd/scalar/quartic.hpp"

namespace fraccd {

// p(eta) = (a2 eta^2 + a1 eta + a0) / sqrt(b4 eta^4 + b3 eta^3 + b2 eta^2 + b1 eta + b0)
// The radicand must stay positive on the search domain (g > 0).
struct RatioCoeffs {
    double a2 = 0, a1 = 0, a0 = 0;
    double b4 = 0, b3 = 0, b2 = 0, b1 = 0, b0 = 0;
};

inline double ratio_numerator(const RatioCoeffs& rc, double e) {
    return (rc.a2 * e + rc.a1) * e + rc.a0;
}

inline double ratio_radicand(const RatioCoeffs& rc, double e) {
    return (((rc.b4 * e + rc.b3) * e + rc.b2) * e + rc.b1) * e + rc.b0;
}

inline double eval_ratio(const RatioCoeffs& rc, double e) {
    const double d = ratio_radicand(rc, e);
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    return ratio_numerator(rc, e) / std::sqrt(d);
}

// Stationarity of p reduces to 2 N'(eta) D(eta) - N(eta) D'(eta) = 0 with N the
// numerator and D the radicand. The degree-5 terms cancel (4 a2 b4 on both
// sides), leaving a quartic.
inline QuarticCoeffs ratio_stationarity_coeffs(const RatioCoeffs& rc) {
    QuarticCoeffs q;
    q.c4 = rc.a2 * rc.b3 - 2.0 * rc.a1 * rc.b4;
    q.c3 = 2.0 * rc.a2 * rc.b2 - rc.a1 * rc.b3 - 4.0 * rc.a0 * rc.b4;
    q.c2 = 3.0 * (rc.a2 * rc.b1 - rc.a0 * rc.b3);
    q.c1 = 4.0 * rc.a2 * rc.b0 + rc.a1 * rc.b1 - 2.0 * rc.a0 * rc.b2;
    q.c0 = 2.0 * rc.a1 * rc.b0 - rc.a0 * rc.b1;
    return q;
}

// Global minimizer of p over the reals. p tends to a2/sqrt(b4) at +-infinity,
// so with a2 > 0 the infimum below that level is attained at a stationary
// point; eta = 0 is always included so the result never exceeds p(0).
// Ties go to the smallest |eta|.
inline std::pair<double, double> solve_fcd_ratio_1d(const RatioCoeffs& rc, double tol = 1e-10) {
    if (rc.a2 <= 0.0) throw UnboundedBelow("ratio numerator must have positive curvature");
    std::vector<double> candidates{0.0};
    const QuarticCoeffs q = ratio_stationarity_coeffs(rc);
    const double scale = std::max({std::abs(q.c4), std::abs(q.c3), std::abs(q.c2),
                                   std::abs(q.c1), std::abs(q.c0)});
    if (scale > 0.0) {
        for (double r : solve_quartic(q, tol)) candidates.push_back(r);
    }
    double best_eta = 0.0;
    double best_val = eval_ratio(rc, 0.0);
    for (double e : candidates) {
        const double v = eval_ratio(rc, e);
        if (v < best_val || (v == best_val && std::abs(e) < std::abs(best_eta))) {
            best_val = v;
            best_eta = e;
        }
    }
    return {best_eta, best_val};
}

// Variant for a denominator sqrt(D(eta)) + offset with offset > 0. No quartic
// reduction exists here; scan the bracket spanned by the offset-free
// stationary candidates (padded) and polish the best section by golden
// section. Guarded fallback only; the default configuration has offset = 0.
inline std::pair<double, double> solve_fcd_ratio_1d_offset(const RatioCoeffs& rc, double offset,
                                                           double tol = 1e-12) {
    if (offset == 0.0) return solve_fcd_ratio_1d(rc, tol);
    if (rc.a2 <= 0.0) throw UnboundedBelow("ratio numerator must have positive curvature");
    auto objective = [&](double e) {
        const double d = ratio_radicand(rc, e);
        if (d <= 0.0) return std::numeric_limits<double>::infinity();
        return ratio_numerator(rc, e) / (std::sqrt(d) + offset);
    };

    std::vector<double> candidates{0.0};
    const QuarticCoeffs q = ratio_stationarity_coeffs(rc);
    for (double r : solve_quartic(q, 1e-10)) candidates.push_back(r);
    double lo = 0.0, hi = 0.0;
    for (double c : candidates) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    const double pad = 2.0 + 0.5 * (hi - lo);
    lo -= pad;
    hi += pad;

    double best_eta = 0.0;
    double best_val = objective(0.0);
    const int n_scan = 1024;
    int best_k = -1;
    for (int k = 0; k <= n_scan; ++k) {
        const double e = lo + (hi - lo) * k / n_scan;
        const double v = objective(e);
        if (v < best_val) {
            best_val = v;
            best_eta = e;
            best_k = k;
        }
    }
    for (double c : candidates) {
        const double v = objective(c);
        if (v < best_val) {
            best_val = v;
            best_eta = c;
            best_k = -1;
        }
    }
    double a = best_eta - (hi - lo) / n_scan;
    double b = best_eta + (hi - lo) / n_scan;
    if (best_k >= 0) {
        a = lo + (hi - lo) * std::max(0, best_k - 1) / n_scan;
        b = lo + (hi - lo) * std::min(n_scan, best_k + 1) / n_scan;
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 120 && b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    const double vm = objective(mid);
    if (vm < best_val) {
        best_val = vm;
        best_eta = mid;
    }
    return {best_eta, best_val};
}

}  // namespace fraccd
