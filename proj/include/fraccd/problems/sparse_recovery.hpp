#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fraccd/csc_matrix.hpp"
#include "fraccd/errors.hpp"
#include "fraccd/problem.hpp"
#include "fraccd/scalar/breakpoints.hpp"
#include "fraccd/topk.hpp"

namespace fraccd {

// Sparse recovery as a fractional program:
//   F(x) = (0.5 ||Gx - y||^2 + gamma ||x||_1) / (gamma * sum of k largest |x_j|)
// subject to ||x||_inf <= vartheta. The denominator vanishes at x = 0, so
// initial points with g(x0) = 0 are rejected; an optional additive g_offset
// is available for experiments that need g bounded away from zero.
class SparseRecoveryProblem {
  public:
    struct Options {
        double gamma = 1e-3;
        index_t k = 1;
        double vartheta = std::numeric_limits<double>::infinity();
        double g_offset = 0.0;
        // The coordinate curvature of 0.5||Gx-y||^2 is (G^T G)_ii, the squared
        // column norm; this flag switches to the row-Gram diagonal (G G^T)_ii
        // for comparison runs and requires rows >= cols.
        bool row_gram_lipschitz = false;
    };

    struct State : StateBase {
        std::vector<double> residual;  // G x - y
        double f_half_sq = 0.0;        // 0.5 ||residual||^2
        double l1 = 0.0;
        double topk_sum = 0.0;
        mutable std::vector<double> scratch;
    };

    SparseRecoveryProblem(CscMatrix g, std::vector<double> y, const Options& opt)
        : g_(std::move(g)), y_(std::move(y)), opt_(opt) {
        if (static_cast<index_t>(y_.size()) != g_.rows())
            throw DimensionMismatch("observation length != rows");
        if (!(opt_.gamma > 0.0)) throw ConfigError("gamma must be positive");
        if (opt_.k < 1 || opt_.k > g_.cols()) throw BadK("k outside 1..n");
        if (!(opt_.vartheta > 0.0)) throw ConfigError("vartheta must be positive");
        if (opt_.g_offset < 0.0) throw ConfigError("g_offset must be nonnegative");
        if (opt_.row_gram_lipschitz) {
            if (g_.rows() < g_.cols())
                throw DimensionMismatch("row-Gram curvature needs rows >= cols");
            row_sq_norms_.assign(g_.rows(), 0.0);
            for (index_t j = 0; j < g_.cols(); ++j) {
                const auto r = g_.col_rows(j);
                const auto v = g_.col_vals(j);
                for (std::size_t p = 0; p < r.size(); ++p) row_sq_norms_[r[p]] += v[p] * v[p];
            }
        }
    }

    index_t dim() const { return g_.cols(); }
    const CscMatrix& design() const { return g_; }
    std::span<const double> observations() const { return y_; }
    const Options& options() const { return opt_; }
    DenominatorKind denominator_kind() const { return DenominatorKind::Convex; }

    State make_state_impl(std::span<const double> x0) const {
        State s;
        s.x.assign(x0.begin(), x0.end());
        refresh_caches(s);
        if (eval_h(s.x) == std::numeric_limits<double>::infinity())
            throw InfeasibleState("initial point outside the box");
        if (!(eval_g(s) > 0.0))
            throw NonPositiveDenominator(
                "g(x0) = 0 (top-k magnitudes all zero); start from a nonzero point or set g_offset");
        return s;
    }

    void refresh_caches(State& s) const {
        s.residual.assign(y_.size(), 0.0);
        g_.matvec(s.x, s.residual);
        for (index_t i = 0; i < g_.rows(); ++i) s.residual[i] -= y_[i];
        s.f_half_sq = 0.0;
        for (double r : s.residual) s.f_half_sq += r * r;
        s.f_half_sq *= 0.5;
        s.l1 = 0.0;
        for (double v : s.x) s.l1 += std::abs(v);
        s.topk_sum = topk_magnitude_sum(s.x, opt_.k, s.scratch);
        s.steps_since_refresh = 0;
        s.objective = objective_from_caches(s);
    }

    double eval_f(const State& s) const { return s.f_half_sq; }

    double grad_f_coord(const State& s, index_t i) const { return g_.col_dot(i, s.residual); }

    double coord_lipschitz(index_t i) const {
        return opt_.row_gram_lipschitz ? row_sq_norms_[i] : g_.col_sq_norm(i);
    }

    double eval_h(std::span<const double> x) const {
        double l1 = 0.0;
        for (double v : x) {
            if (std::abs(v) > opt_.vartheta) return std::numeric_limits<double>::infinity();
            l1 += std::abs(v);
        }
        return opt_.gamma * l1;
    }

    double eval_g(const State& s) const { return opt_.gamma * s.topk_sum + opt_.g_offset; }

    void subgrad_g(const State& s, std::span<double> out) const {
        subgrad_topk(s.x, opt_.k, out);
        for (double& v : out) v *= opt_.gamma;
    }

    Interval h_subdiff_coord(std::span<const double> x, index_t i) const {
        Interval iv;
        if (x[i] > 0.0)
            iv = {opt_.gamma, opt_.gamma};
        else if (x[i] < 0.0)
            iv = {-opt_.gamma, -opt_.gamma};
        else
            iv = {-opt_.gamma, opt_.gamma};
        // box normal cone
        if (std::isfinite(opt_.vartheta)) {
            if (x[i] >= opt_.vartheta) iv.hi = std::numeric_limits<double>::infinity();
            if (x[i] <= -opt_.vartheta) iv.lo = -std::numeric_limits<double>::infinity();
        }
        return iv;
    }

    Interval g_subdiff_coord(const State& s, index_t i) const {
        const auto sel = topk_indices(s.x, opt_.k);
        const bool in_topk =
            std::find(sel.begin(), sel.end(), i) != sel.end() && s.x[i] != 0.0;
        if (in_topk) {
            const double v = s.x[i] > 0.0 ? opt_.gamma : -opt_.gamma;
            return {v, v};
        }
        return {-opt_.gamma, opt_.gamma};
    }

    // Exact parametric objective of the 1D subproblem at step eta, used both
    // by the solve and by the verification oracles.
    double pcd_objective_1d(const State& s, index_t i, double lambda, double theta,
                            double eta) const {
        const double a = coord_lipschitz(i) + theta;
        const double b = g_.col_dot(i, s.residual);
        const double xi = s.x[i] + eta;
        const double tau = opt_.gamma * lambda;
        const double tk = topk_magnitude_sum_subst(s.x, i, xi, opt_.k, s.scratch);
        return 0.5 * a * eta * eta + b * eta + opt_.gamma * std::abs(xi) - tau * tk;
    }

    PcdBreakpointParams pcd_params(const State& s, index_t i, double lambda, double theta) const {
        PcdBreakpointParams p;
        p.a = coord_lipschitz(i) + theta;
        p.b = g_.col_dot(i, s.residual);
        p.gamma = opt_.gamma;
        p.tau = opt_.gamma * lambda;
        p.xi = s.x[i];
        if (std::isfinite(opt_.vartheta)) {
            p.c1 = -opt_.vartheta - s.x[i];
            p.c2 = opt_.vartheta - s.x[i];
        }
        return p;
    }

    double solve_pcd_1d(const State& s, index_t i, double lambda, double theta) const {
        const auto params = pcd_params(s, i, lambda, theta);
        const auto candidates = pcd_breakpoints(params);
        const double b = params.b;
        const double tau = params.tau;
        auto objective = [&](double eta) {
            const double xi = s.x[i] + eta;
            const double tk = topk_magnitude_sum_subst(s.x, i, xi, opt_.k, s.scratch);
            return 0.5 * params.a * eta * eta + b * eta + opt_.gamma * std::abs(xi) - tau * tk;
        };
        return argmin_over_candidates(candidates, objective).first;
    }

    double solve_fcd_1d(const State&, index_t, double) const {
        throw UnsupportedVariant("no exact fractional 1D solve for the top-k denominator");
    }

    void apply_step(State& s, index_t i, double eta) const {
        if (eta != 0.0) {
            const double b = g_.col_dot(i, s.residual);
            s.f_half_sq += eta * b + 0.5 * eta * eta * g_.col_sq_norm(i);
            g_.column_axpy(i, eta, s.residual);
            s.l1 += std::abs(s.x[i] + eta) - std::abs(s.x[i]);
            s.x[i] += eta;
            s.topk_sum = topk_magnitude_sum(s.x, opt_.k, s.scratch);
        }
        ++s.steps_since_refresh;
        s.objective = objective_from_caches(s);
    }

    bool has_h_prox() const { return true; }

    // argmin_v u (v - xi) + (L/2)(v - xi)^2 + gamma|v| + box
    double h_prox_coord(double xi, double u, double lipschitz) const {
        const double v = xi - u / lipschitz;
        const double soft = std::copysign(std::max(std::abs(v) - opt_.gamma / lipschitz, 0.0), v);
        return std::clamp(soft, -opt_.vartheta, opt_.vartheta);
    }

    bool scale_invariant() const { return false; }

  private:
    double objective_from_caches(const State& s) const {
        const double g = eval_g(s);
        if (!(g > 0.0)) throw NonPositiveDenominator("iterate reached g(x) = 0");
        return (s.f_half_sq + opt_.gamma * s.l1) / g;
    }

    CscMatrix g_;
    std::vector<double> y_;
    Options opt_;
    std::vector<double> row_sq_norms_;
};

}  // namespace fraccd
