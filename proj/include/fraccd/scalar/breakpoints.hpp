#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "fraccd/errors.hpp"

namespace fraccd {

// Parameters of the parametric one-dimensional subproblem
//   min_{c1 <= eta <= c2}  (a/2) eta^2 + b eta + gamma|xi + eta| - tau * topk(x + eta e_i)
// a = c_i + theta, b = partial gradient, tau = gamma * F(x), bounds from the
// infinity-norm box. c1/c2 may be +-infinity.
struct PcdBreakpointParams {
    double a = 1.0;
    double b = 0.0;
    double gamma = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double c1 = -std::numeric_limits<double>::infinity();
    double c2 = std::numeric_limits<double>::infinity();
};

// The candidate set: the five unconstrained breakpoints clamped into [c1,c2],
// plus any finite endpoint. At most 7 values after duplicate removal.
inline std::vector<double> pcd_breakpoints(const PcdBreakpointParams& p) {
    const double cands[5] = {
        -p.xi,
        (p.tau - p.gamma - p.b) / p.a,
        (p.gamma - p.tau - p.b) / p.a,
        (-p.gamma - p.b) / p.a,
        (p.gamma - p.b) / p.a,
    };
    std::vector<double> out;
    out.reserve(7);
    if (std::isfinite(p.c1)) out.push_back(p.c1);
    if (std::isfinite(p.c2)) out.push_back(p.c2);
    for (double c : cands) out.push_back(std::min(p.c2, std::max(p.c1, c)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Exact argmin over a finite candidate set; ties go to the smallest |eta|.
// The objective must be the true subproblem objective (with exact top-k
// recomputation), so the returned point is never worse than any candidate.
template <class Objective>
inline std::pair<double, double> argmin_over_candidates(const std::vector<double>& candidates,
                                                        Objective&& objective) {
    if (candidates.empty()) throw EmptyCandidates("no candidates to minimize over");
    std::vector<double> order(candidates);
    std::sort(order.begin(), order.end(), [](double x, double y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
        return x < y;
    });
    double best_eta = order.front();
    double best_val = objective(best_eta);
    for (std::size_t i = 1; i < order.size(); ++i) {
        const double v = objective(order[i]);
        if (v < best_val) {
            best_val = v;
            best_eta = order[i];
        }
    }
    return {best_eta, best_val};
}

}  // namespace fraccd
