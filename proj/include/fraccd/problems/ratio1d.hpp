#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fraccd/errors.hpp"
#include "fraccd/problem.hpp"

namespace fraccd {

// One-dimensional family F(x) = (x - center)^2 / (|slope x + intercept| + base)
// with base > 0. Small enough to solve both coordinate subproblems in closed
// form, which makes it the reference fixture for the stationarity hierarchy.
class Ratio1DProblem {
  public:
    struct Options {
        double center = -2.0;
        double slope = 3.0;
        double intercept = 2.0;
        double base = 1.0;
    };

    struct State : StateBase {};

    Ratio1DProblem() : Ratio1DProblem(Options()) {}

    explicit Ratio1DProblem(const Options& opt) : opt_(opt) {
        if (!(opt_.base > 0.0)) throw ConfigError("base must be positive");
        if (opt_.slope == 0.0) throw ConfigError("slope must be nonzero");
    }

    index_t dim() const { return 1; }
    const Options& options() const { return opt_; }
    DenominatorKind denominator_kind() const { return DenominatorKind::Convex; }

    State make_state_impl(std::span<const double> x0) const {
        State s;
        s.x.assign(x0.begin(), x0.end());
        refresh_caches(s);
        return s;
    }

    void refresh_caches(State& s) const {
        s.steps_since_refresh = 0;
        s.objective = value_at(s.x[0]);
    }

    double value_at(double x) const {
        const double d = x - opt_.center;
        return d * d / g_at(x);
    }

    double g_at(double x) const { return std::abs(opt_.slope * x + opt_.intercept) + opt_.base; }

    double eval_f(const State& s) const {
        const double d = s.x[0] - opt_.center;
        return d * d;
    }
    double grad_f_coord(const State& s, index_t) const { return 2.0 * (s.x[0] - opt_.center); }
    double coord_lipschitz(index_t) const { return 2.0; }
    double eval_h(std::span<const double>) const { return 0.0; }
    double eval_g(const State& s) const { return g_at(s.x[0]); }

    void subgrad_g(const State& s, std::span<double> out) const {
        const double t = opt_.slope * s.x[0] + opt_.intercept;
        out[0] = t > 0.0 ? opt_.slope : (t < 0.0 ? -opt_.slope : 0.0);
    }

    Interval h_subdiff_coord(std::span<const double>, index_t) const { return {0.0, 0.0}; }

    Interval g_subdiff_coord(const State& s, index_t) const {
        const double t = opt_.slope * s.x[0] + opt_.intercept;
        if (t > 0.0) return {opt_.slope, opt_.slope};
        if (t < 0.0) return {-opt_.slope, -opt_.slope};
        return {-std::abs(opt_.slope), std::abs(opt_.slope)};
    }

    double pcd_objective_1d(const State& s, index_t, double lambda, double theta,
                            double eta) const {
        const double a = 2.0 + theta;
        const double b = 2.0 * (s.x[0] - opt_.center);
        return eval_f(s) + b * eta + 0.5 * a * eta * eta - lambda * g_at(s.x[0] + eta);
    }

    // min over eta of J(x, eta) - lambda g(x + eta): the two smooth branches
    // contribute one stationary point each and the kink one more candidate.
    double solve_pcd_1d(const State& s, index_t i, double lambda, double theta) const {
        const double a = 2.0 + theta;
        const double b = 2.0 * (s.x[0] - opt_.center);
        const double kink = -(opt_.slope * s.x[0] + opt_.intercept) / opt_.slope;
        const std::array<double, 3> candidates = {
            kink,
            (lambda * opt_.slope - b) / a,
            (-lambda * opt_.slope - b) / a,
        };
        double best_eta = 0.0;
        double best_val = pcd_objective_1d(s, i, lambda, theta, 0.0);
        for (double e : candidates) {
            const double v = pcd_objective_1d(s, i, lambda, theta, e);
            if (v < best_val || (v == best_val && std::abs(e) < std::abs(best_eta))) {
                best_val = v;
                best_eta = e;
            }
        }
        return best_eta;
    }

    double fcd_objective_1d(const State& s, index_t, double theta, double eta) const {
        const double a = 2.0 + theta;
        const double b = 2.0 * (s.x[0] - opt_.center);
        return (eval_f(s) + b * eta + 0.5 * a * eta * eta) / g_at(s.x[0] + eta);
    }

    // min over eta of J(x, eta) / g(x + eta): quadratic over affine on each
    // branch, so stationary points solve a quadratic per branch.
    double solve_fcd_1d(const State& s, index_t i, double theta) const {
        const double qa = 0.5 * (2.0 + theta);           // numerator eta^2 coefficient
        const double qb = 2.0 * (s.x[0] - opt_.center);  // numerator eta coefficient
        const double qc = eval_f(s);
        std::vector<double> candidates{-(opt_.slope * s.x[0] + opt_.intercept) / opt_.slope};
        for (double sign : {1.0, -1.0}) {
            const double sl = sign * opt_.slope;
            const double d0 = sign * (opt_.slope * s.x[0] + opt_.intercept) + opt_.base;
            // (2 qa e + qb)(sl e + d0) - sl (qa e^2 + qb e + qc) = 0
            const double A = qa * sl;
            const double B = 2.0 * qa * d0;
            const double C = qb * d0 - sl * qc;
            const double disc = B * B - 4.0 * A * C;
            if (A == 0.0) {
                if (B != 0.0) candidates.push_back(-C / B);
            } else if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                candidates.push_back((-B + sq) / (2.0 * A));
                candidates.push_back((-B - sq) / (2.0 * A));
            }
        }
        double best_eta = 0.0;
        double best_val = fcd_objective_1d(s, i, theta, 0.0);
        for (double e : candidates) {
            const double v = fcd_objective_1d(s, i, theta, e);
            if (v < best_val || (v == best_val && std::abs(e) < std::abs(best_eta))) {
                best_val = v;
                best_eta = e;
            }
        }
        return best_eta;
    }

    void apply_step(State& s, index_t, double eta) const {
        s.x[0] += eta;
        ++s.steps_since_refresh;
        s.objective = value_at(s.x[0]);
    }

    bool has_h_prox() const { return true; }
    double h_prox_coord(double xi, double u, double lipschitz) const { return xi - u / lipschitz; }
    bool scale_invariant() const { return false; }

  private:
    Options opt_;
};

}  // namespace fraccd
