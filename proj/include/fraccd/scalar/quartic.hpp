#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fraccd/errors.hpp"

namespace fraccd {

struct QuarticCoeffs {
    double c4 = 0, c3 = 0, c2 = 0, c1 = 0, c0 = 0;
};

namespace detail {

inline double eval_quartic(const QuarticCoeffs& q, double x) {
    return (((q.c4 * x + q.c3) * x + q.c2) * x + q.c1) * x + q.c0;
}

inline double eval_quartic_d(const QuarticCoeffs& q, double x) {
    return ((4.0 * q.c4 * x + 3.0 * q.c3) * x + 2.0 * q.c2) * x + q.c1;
}

// Real roots of x^2 + bx + c, stable citardauq form.
inline void quadratic_roots(double b, double c, std::vector<double>& out) {
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    out.push_back(q);
    if (q != 0.0)
        out.push_back(c / q);
    else
        out.push_back(-b);
}

// All real roots of x^3 + a x^2 + b x + c.
inline void cubic_roots(double a, double b, double c, std::vector<double>& out) {
    // depressed: t^3 + pt + q with x = t - a/3
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = std::cbrt(-q / 2.0 - sq);
        out.push_back(u + v + shift);
    } else if (p == 0.0 && q == 0.0) {
        out.insert(out.end(), 3, shift);
    } else {
        // three real roots, trigonometric form
        const double r = std::sqrt(-p / 3.0);
        double arg = -q / (2.0 * r * r * r);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            out.push_back(2.0 * r * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift);
    }
}

}  // namespace detail

// All real roots, ascending, repeated according to multiplicity. Closed-form
// Ferrari factorization with Newton polishing; residual-filtered so spurious
// near-roots from cancellation are dropped.
inline std::vector<double> solve_quartic(const QuarticCoeffs& q, double tol = 1e-10) {
    const double scale =
        std::max({std::abs(q.c4), std::abs(q.c3), std::abs(q.c2), std::abs(q.c1), std::abs(q.c0)});
    if (scale == 0.0) throw DegenerateAllZero("all quartic coefficients are zero");

    std::vector<double> roots;
    const double eps_deg = 1e-14 * scale;
    if (std::abs(q.c4) <= eps_deg) {
        if (std::abs(q.c3) <= eps_deg) {
            if (std::abs(q.c2) <= eps_deg) {
                if (std::abs(q.c1) <= eps_deg) return {};  // constant, no roots
                roots.push_back(-q.c0 / q.c1);
            } else {
                detail::quadratic_roots(q.c1 / q.c2, q.c0 / q.c2, roots);
            }
        } else {
            detail::cubic_roots(q.c2 / q.c3, q.c1 / q.c3, q.c0 / q.c3, roots);
        }
    } else {
        // depressed quartic y^4 + p y^2 + r y + s with x = y - c3/(4 c4)
        const double a = q.c3 / q.c4, b = q.c2 / q.c4, c = q.c1 / q.c4, d = q.c0 / q.c4;
        const double shift = -a / 4.0;
        const double p = b - 3.0 * a * a / 8.0;
        const double r = c + a * a * a / 8.0 - a * b / 2.0;
        const double s = d - 3.0 * a * a * a * a / 256.0 + a * a * b / 16.0 - a * c / 4.0;
        if (std::abs(r) <= 1e-14 * std::max(1.0, std::max(std::abs(p), std::abs(s)))) {
            // biquadratic: y^2 = t with t^2 + p t + s = 0
            std::vector<double> ts;
            detail::quadratic_roots(p, s, ts);
            for (double t : ts) {
                if (t > 0.0) {
                    roots.push_back(std::sqrt(t) + shift);
                    roots.push_back(-std::sqrt(t) + shift);
                } else if (t >= -1e-14 * std::max(1.0, std::abs(p))) {
                    roots.push_back(shift);
                    roots.push_back(shift);
                }
            }
        } else {
            // resolvent cubic z^3 + 2p z^2 + (p^2 - 4s) z - r^2 = 0 has a root z >= 0
            std::vector<double> zs;
            detail::cubic_roots(2.0 * p, p * p - 4.0 * s, -r * r, zs);
            double z = -1.0;
            for (double zi : zs) z = std::max(z, zi);
            if (z > 0.0) {
                const double u = std::sqrt(z);
                const double half = 0.5 * (p + z);
                const double qq = 0.5 * r / u;
                std::vector<double> ys;
                detail::quadratic_roots(u, half - qq, ys);   // y^2 + u y + (half - qq)
                detail::quadratic_roots(-u, half + qq, ys);  // y^2 - u y + (half + qq)
                for (double y : ys) roots.push_back(y + shift);
            }
        }
    }

    // polish on the original polynomial
    for (double& x : roots) {
        for (int it = 0; it < 5; ++it) {
            const double f = detail::eval_quartic(q, x);
            const double df = detail::eval_quartic_d(q, x);
            if (df == 0.0) break;
            const double step = f / df;
            if (!std::isfinite(step)) break;
            x -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
        }
    }

    // keep only genuine roots: |poly(x)| <= tol * scale * max(1,|x|)^4
    std::vector<double> out;
    for (double x : roots) {
        const double bound = tol * scale * std::pow(std::max(1.0, std::abs(x)), 4);
        if (std::isfinite(x) && std::abs(detail::eval_quartic(q, x)) <= bound) out.push_back(x);
    }
    std::sort(out.begin(), out.end());

    // polishing can collapse a multiple root into near-identical copies; snap
    // clusters to their mean so multiplicity is represented by exact repeats
    for (std::size_t i = 0; i < out.size();) {
        std::size_t j = i + 1;
        while (j < out.size() && out[j] - out[i] <= 1e-8 * (1.0 + std::abs(out[i]))) ++j;
        if (j - i > 1) {
            double mean = 0.0;
            for (std::size_t k = i; k < j; ++k) mean += out[k];
            mean /= static_cast<double>(j - i);
            for (std::size_t k = i; k < j; ++k) out[k] = mean;
        }
        i = j;
    }
    return out;
}

}  // namespace fraccd
