#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fraccd/errors.hpp"

namespace fraccd {

enum class DenominatorKind { Convex, ConcaveDifferentiable };

// Closed interval used for subdifferential enclosures; endpoints may be +-inf
// (box-constraint normal cones).
struct Interval {
    double lo = 0.0, hi = 0.0;
};

// Per-problem iterate state. Problems extend this with their incremental
// caches (residuals, norms, power sums).
struct StateBase {
    std::vector<double> x;
    double objective = 0.0;           // cached F(x); coherent with the caches
    std::int64_t steps_since_refresh = 0;
};

/*
 * Problem concept. A problem type P models a structured fractional objective
 *   F(x) = (f(x) + h(x)) / g(x)
 * and provides, with State = P::State derived from StateBase:
 *
 *   index_t dim() const
 *   State   make_state(std::span<const double> x0) const   (validates + builds caches)
 *   void    refresh_caches(State&) const                   (from-scratch recompute)
 *   double  eval_f(const State&) const
 *   double  grad_f_coord(const State&, index_t i) const
 *   double  coord_lipschitz(index_t i) const
 *   double  eval_h(std::span<const double> x) const        (+inf when infeasible)
 *   double  eval_g(const State&) const
 *   void    subgrad_g(const State&, std::span<double>) const
 *   DenominatorKind denominator_kind() const
 *   double  solve_fcd_1d(const State&, index_t i, double theta) const
 *   double  solve_pcd_1d(const State&, index_t i, double lambda, double theta) const
 *   void    apply_step(State&, index_t i, double eta) const
 *
 * Either 1D solve may throw UnsupportedVariant when no exact procedure exists
 * for that pairing. Problems with a separable prox for h additionally provide
 *   bool    has_h_prox() const
 *   double  h_prox_coord(double xi, double u, double lipschitz) const
 * returning argmin_v u(v-xi) + (L/2)(v-xi)^2 + h_i(v).
 */

using index_t = std::int64_t;

// F = (f + h) / g from the state caches, with the positivity guards.
template <class Problem>
double evaluate_objective(const Problem& problem, const typename Problem::State& state) {
    const double h = problem.eval_h(state.x);
    if (!(h < std::numeric_limits<double>::infinity())) throw InfeasibleState("h(x) is infinite");
    const double g = problem.eval_g(state);
    if (!(g > 0.0)) throw NonPositiveDenominator("g(x) must be positive");
    return (problem.eval_f(state) + h) / g;
}

template <class Problem>
typename Problem::State make_state(const Problem& problem, std::span<const double> x0) {
    if (static_cast<index_t>(x0.size()) != problem.dim())
        throw DimensionMismatch("initial point has wrong dimension");
    auto state = problem.make_state_impl(x0);
    state.objective = evaluate_objective(problem, state);
    return state;
}

}  // namespace fraccd
