#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fraccd/csc_matrix.hpp"
#include "fraccd/errors.hpp"
#include "fraccd/problem.hpp"
#include "fraccd/scalar/ratio_min.hpp"

namespace fraccd {

// The l4-norm eigenvalue problem (Q = I, p = 4):
//   F(x) = (||x||^2 + gamma3) / (||Gx||_4^2 + gamma4)
// with ||Gx||_4^2 = sqrt(sum_j (Gx)_j^4). With gamma3 = gamma4 = 0 the
// objective is scale invariant, so iterates are renormalized whenever their
// norm drifts out of a wide band; this leaves every F value unchanged.
class EigL4Problem {
  public:
    struct Options {
        double gamma3 = 0.0;
        double gamma4 = 0.0;
        DenominatorKind kind = DenominatorKind::ConcaveDifferentiable;
    };

    struct State : StateBase {
        std::vector<double> z;  // G x
        double xsq = 0.0;       // ||x||^2
        double z4 = 0.0;        // sum z_j^4
    };

    explicit EigL4Problem(CscMatrix g) : EigL4Problem(std::move(g), Options()) {}

    EigL4Problem(CscMatrix g, const Options& opt) : g_(std::move(g)), opt_(opt) {
        if (opt_.gamma3 < 0.0 || opt_.gamma4 < 0.0)
            throw ConfigError("gamma3/gamma4 must be nonnegative");
    }

    index_t dim() const { return g_.cols(); }
    const CscMatrix& design() const { return g_; }
    const Options& options() const { return opt_; }
    DenominatorKind denominator_kind() const { return opt_.kind; }

    State make_state_impl(std::span<const double> x0) const {
        State s;
        s.x.assign(x0.begin(), x0.end());
        refresh_caches(s);
        if (!(eval_g(s) > 0.0))
            throw NonPositiveDenominator("Gx = 0 at the initial point");
        return s;
    }

    void refresh_caches(State& s) const {
        s.z.assign(g_.rows(), 0.0);
        g_.matvec(s.x, s.z);
        s.xsq = 0.0;
        for (double v : s.x) s.xsq += v * v;
        s.z4 = 0.0;
        for (double v : s.z) s.z4 += v * v * v * v;
        s.steps_since_refresh = 0;
        s.objective = objective_from_caches(s);
    }

    double eval_f(const State& s) const { return s.xsq + opt_.gamma3; }
    double grad_f_coord(const State& s, index_t i) const { return 2.0 * s.x[i]; }
    double coord_lipschitz(index_t) const { return 2.0; }

    double eval_h(std::span<const double>) const { return 0.0; }

    double eval_g(const State& s) const { return std::sqrt(std::max(s.z4, 0.0)) + opt_.gamma4; }

    void subgrad_g(const State& s, std::span<double> out) const {
        // grad of sqrt(sum z^4) is (2 / sqrt(sum z^4)) G^T z^3
        const double root = std::sqrt(std::max(s.z4, 0.0));
        if (!(root > 0.0)) throw NonPositiveDenominator("gradient of g undefined at Gx = 0");
        std::vector<double> zc(s.z.size());
        for (std::size_t j = 0; j < s.z.size(); ++j) zc[j] = s.z[j] * s.z[j] * s.z[j];
        g_.matvec_t(zc, out);
        for (double& v : out) v *= 2.0 / root;
    }

    Interval h_subdiff_coord(std::span<const double>, index_t) const { return {0.0, 0.0}; }

    Interval g_subdiff_coord(const State& s, index_t i) const {
        const double root = std::sqrt(std::max(s.z4, 0.0));
        if (!(root > 0.0)) throw NonPositiveDenominator("gradient of g undefined at Gx = 0");
        double acc = 0.0;
        const auto rows = g_.col_rows(i);
        const auto vals = g_.col_vals(i);
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const double z = s.z[rows[p]];
            acc += z * z * z * vals[p];
        }
        const double v = 2.0 * acc / root;
        return {v, v};
    }

    // Coefficients of sum_j (z_j + eta col_j)^4 by binomial expansion; only the
    // nonzero entries of the column contribute except the constant term, which
    // comes from the cached power sum.
    RatioCoeffs fcd_ratio_coeffs(const State& s, index_t i, double theta) const {
        RatioCoeffs rc;
        rc.a2 = 0.5 * (coord_lipschitz(i) + theta);
        rc.a1 = 2.0 * s.x[i];
        rc.a0 = s.xsq + opt_.gamma3;
        rc.b4 = g_.col_pow4_sum(i);
        rc.b0 = s.z4;
        const auto rows = g_.col_rows(i);
        const auto vals = g_.col_vals(i);
        double b3 = 0.0, b2 = 0.0, b1 = 0.0;
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const double z = s.z[rows[p]];
            const double c = vals[p];
            b3 += z * c * c * c;
            b2 += z * z * c * c;
            b1 += z * z * z * c;
        }
        rc.b3 = 4.0 * b3;
        rc.b2 = 6.0 * b2;
        rc.b1 = 4.0 * b1;
        return rc;
    }

    double fcd_objective_1d(const State& s, index_t i, double theta, double eta) const {
        const auto rc = fcd_ratio_coeffs(s, i, theta);
        const double d = ratio_radicand(rc, eta);
        if (d <= 0.0) return std::numeric_limits<double>::infinity();
        return ratio_numerator(rc, eta) / (std::sqrt(d) + opt_.gamma4);
    }

    double solve_fcd_1d(const State& s, index_t i, double theta) const {
        if (!(s.z4 > 0.0)) throw NonPositiveDenominator("subproblem undefined at Gx = 0");
        const auto rc = fcd_ratio_coeffs(s, i, theta);
        if (opt_.gamma4 == 0.0) return solve_fcd_ratio_1d(rc).first;
        return solve_fcd_ratio_1d_offset(rc, opt_.gamma4).first;
    }

    double solve_pcd_1d(const State&, index_t, double, double) const {
        throw UnsupportedVariant("no exact parametric 1D solve for the l4 denominator");
    }

    void apply_step(State& s, index_t i, double eta) const {
        if (eta != 0.0) {
            const auto rc = fcd_ratio_coeffs(s, i, 0.0);
            s.z4 += ((rc.b4 * eta + rc.b3) * eta + rc.b2) * eta * eta + rc.b1 * eta;
            s.xsq += 2.0 * s.x[i] * eta + eta * eta;
            s.x[i] += eta;
            g_.column_axpy(i, eta, s.z);
            maybe_rescale(s);
        }
        ++s.steps_since_refresh;
        s.objective = objective_from_caches(s);
    }

    bool has_h_prox() const { return true; }
    double h_prox_coord(double xi, double u, double lipschitz) const { return xi - u / lipschitz; }

    bool scale_invariant() const { return opt_.gamma3 == 0.0 && opt_.gamma4 == 0.0; }

    // Scale-factor recovery for the unit-sphere formulation (Q = I).
    static std::vector<double> recover_unit_solution(std::span<const double> x) {
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) throw ZeroVector("cannot normalize the zero vector");
        std::vector<double> out(x.begin(), x.end());
        for (double& v : out) v /= nrm;
        return out;
    }

  private:
    void maybe_rescale(State& s) const {
        if (!scale_invariant()) return;
        if (s.xsq > 1e60 || (s.xsq > 0.0 && s.xsq < 1e-60)) {
            const double inv = 1.0 / std::sqrt(s.xsq);
            for (double& v : s.x) v *= inv;
            for (double& v : s.z) v *= inv;
            s.z4 *= inv * inv * inv * inv;
            s.xsq = 1.0;
        }
    }

    double objective_from_caches(const State& s) const {
        const double g = eval_g(s);
        if (!(g > 0.0)) throw NonPositiveDenominator("denominator vanished (Gx = 0)");
        return (s.xsq + opt_.gamma3) / g;
    }

    CscMatrix g_;
    Options opt_;
};

}  // namespace fraccd
