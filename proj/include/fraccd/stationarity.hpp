#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "fraccd/csc_matrix.hpp"
#include "fraccd/dense.hpp"
#include "fraccd/errors.hpp"
#include "fraccd/problem.hpp"
#include "fraccd/rng.hpp"

namespace fraccd {

struct ClassifyTolerances {
    double inclusion = 1e-9;     // slack for the subdifferential inclusion
    double directional = 1e-6;   // refutation threshold for directional derivatives
    double stationarity = 1e-8;  // |eta| below which a subproblem solve counts as zero
};

// Results of the brute-force point classification. A condition is nullopt when
// it cannot be evaluated for this problem (missing exact 1D solver, or the
// directional sweep was skipped). The directional test samples finitely many
// directions: false is a refutation with a witness, true means "not refuted".
struct PointClassification {
    std::optional<bool> is_c, is_d, is_fcw, is_pcw;
    index_t c_witness = -1;                  // coordinate violating the inclusion
    std::vector<double> d_witness;           // direction with negative derivative
    index_t fcw_witness = -1;
    double fcw_eta = 0.0;
    index_t pcw_witness = -1;
    double pcw_eta = 0.0;
};

namespace detail {

// 2D: evenly spaced angles. 3D: Fibonacci sphere. 4D: Kronecker lattice on the
// three hyperspherical angles. All deterministic.
inline std::vector<std::vector<double>> direction_set(index_t n) {
    std::vector<std::vector<double>> dirs;
    if (n == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
    } else if (n == 2) {
        for (int k = 0; k < 720; ++k) {
            const double a = 2.0 * std::numbers::pi * k / 720.0;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
    } else if (n == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < 2000; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / 2000.0;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden * k;
            dirs.push_back({r * std::cos(a), r * std::sin(a), z});
        }
    } else {
        const double a1 = 0.6180339887498949, a2 = 0.7548776662466927, a3 = 0.5698402909980532;
        for (int k = 0; k < 2000; ++k) {
            const double t1 = std::numbers::pi * std::fmod((k + 0.5) * a1, 1.0);
            const double t2 = std::numbers::pi * std::fmod((k + 0.5) * a2, 1.0);
            const double t3 = 2.0 * std::numbers::pi * std::fmod((k + 0.5) * a3, 1.0);
            dirs.push_back({std::cos(t1), std::sin(t1) * std::cos(t2),
                            std::sin(t1) * std::sin(t2) * std::cos(t3),
                            std::sin(t1) * std::sin(t2) * std::sin(t3)});
        }
    }
    return dirs;
}

}  // namespace detail

// Brute-force classification against the four optimality conditions. The
// critical-point inclusion is exact for the in-scope problems (per-coordinate
// subdifferential intervals); the directional test uses one-sided differences
// over a dense direction set and needs n <= 4.
template <class Problem>
PointClassification classify_point(const Problem& problem, std::span<const double> x,
                                   double theta, const ClassifyTolerances& tol = {},
                                   bool with_directional = true) {
    const index_t n = problem.dim();
    auto state = make_state(problem, x);
    const double fval = state.objective;
    PointClassification out;

    // C-point: 0 in grad f + dh - F dg, coordinate-wise interval arithmetic
    {
        bool ok = true;
        for (index_t i = 0; i < n && ok; ++i) {
            const double gf = problem.grad_f_coord(state, i);
            const Interval h = problem.h_subdiff_coord(state.x, i);
            const Interval g = problem.g_subdiff_coord(state, i);
            const double lo = gf + h.lo - fval * g.hi;
            const double hi = gf + h.hi - fval * g.lo;
            if (lo > tol.inclusion || hi < -tol.inclusion) {
                ok = false;
                out.c_witness = i;
            }
        }
        out.is_c = ok;
    }

    // D-point: F'(x; d) >= 0 sampled over the direction set
    if (with_directional) {
        if (n > 4) throw DimensionTooLarge("directional sweep supports n <= 4");
        const double h_fd = 1e-7;
        bool ok = true;
        std::vector<double> xp(n);
        for (const auto& d : detail::direction_set(n)) {
            for (index_t j = 0; j < n; ++j) xp[j] = x[j] + h_fd * d[j];
            double fv;
            try {
                fv = evaluate_objective(problem, make_state(problem, xp));
            } catch (const SolverError&) {
                continue;  // direction leaves the domain
            }
            const double deriv = (fv - fval) / h_fd;
            if (deriv < -tol.directional * (1.0 + std::abs(fval))) {
                ok = false;
                out.d_witness = d;
                break;
            }
        }
        out.is_d = ok;
    }

    // FCW / PCW: no single-coordinate global subproblem solve may move
    try {
        bool ok = true;
        for (index_t i = 0; i < n; ++i) {
            const double eta = problem.solve_fcd_1d(state, i, theta);
            if (std::abs(eta) > tol.stationarity * (1.0 + std::abs(state.x[i]))) {
                ok = false;
                out.fcw_witness = i;
                out.fcw_eta = eta;
                break;
            }
        }
        out.is_fcw = ok;
    } catch (const UnsupportedVariant&) {
    }
    try {
        bool ok = true;
        for (index_t i = 0; i < n; ++i) {
            const double eta = problem.solve_pcd_1d(state, i, fval, theta);
            if (std::abs(eta) > tol.stationarity * (1.0 + std::abs(state.x[i]))) {
                ok = false;
                out.pcw_witness = i;
                out.pcw_eta = eta;
                break;
            }
        }
        out.is_pcw = ok;
    } catch (const UnsupportedVariant&) {
    }
    return out;
}

// Residual of the per-coordinate subproblem map: R(x) = (1/n) sum |P_i(x)|
// where P_i is the global minimizer of the coordinate subproblem at x, plus
// the mean squared distances used by the approximate-point definitions.
struct ResidualReport {
    double r = 0.0;                    // (1/n) sum |P_i(x)|, parametric subproblems
    std::vector<double> per_coord;     // |P_i(x)|
    double eps_pcw = 0.0;              // (1/n) sum P_i(x)^2
    std::optional<double> eps_fcw;     // same for the fractional subproblem if solvable
};

template <class Problem>
ResidualReport pcw_residual(const Problem& problem, std::span<const double> x, double theta) {
    const index_t n = problem.dim();
    auto state = make_state(problem, x);
    const double fval = state.objective;
    ResidualReport rep;
    rep.per_coord.resize(n);
    for (index_t i = 0; i < n; ++i) {
        const double eta = problem.solve_pcd_1d(state, i, fval, theta);
        rep.per_coord[i] = std::abs(eta);
        rep.r += std::abs(eta);
        rep.eps_pcw += eta * eta;
    }
    rep.r /= static_cast<double>(n);
    rep.eps_pcw /= static_cast<double>(n);
    try {
        double acc = 0.0;
        for (index_t i = 0; i < n; ++i) {
            const double eta = problem.solve_fcd_1d(state, i, theta);
            acc += eta * eta;
        }
        rep.eps_fcw = acc / static_cast<double>(n);
    } catch (const UnsupportedVariant&) {
    }
    return rep;
}

// rho = 6 m max_i (G G^T)_ii * lambda_max(G^T G) / lambda_min(G^T G), the
// global weak-convexity modulus of -||Gx||_4^2 for full-column-rank G.
// Dense symmetric eigensolve up to n = 200, shifted power iteration beyond.
inline double rho_bound_l4(const CscMatrix& g, double tol = 1e-9) {
    const index_t n = g.cols();
    if (g.nnz() == 0) throw ZeroMatrix("rho bound of an all-zero matrix");
    double lmax, lmin;
    if (n <= 200) {
        const auto ev = sym_eigenvalues(gram_matrix(g), n);
        lmin = ev.front();
        lmax = ev.back();
    } else {
        lmax = spectral_norm_sq(g, 2000, 1e-12) / (1.0 + 10.0 * 1e-12);
        // largest eigenvalue of (lmax I - G^T G) gives lmin by reflection; the
        // bottom of the spectrum is often clustered, so run until the Rayleigh
        // quotient has been flat for several consecutive iterations
        std::vector<double> v(n), gv(g.rows()), w(n);
        Rng rng(0x5eedULL);
        for (auto& z : v) z = rng.normal();
        double mu = 0.0;
        int flat = 0;
        for (int it = 0; it < 60'000 && flat < 5; ++it) {
            g.matvec(v, gv);
            g.matvec_t(gv, w);
            double nw = 0.0;
            for (index_t j = 0; j < n; ++j) {
                w[j] = lmax * v[j] - w[j];
                nw += w[j] * w[j];
            }
            nw = std::sqrt(nw);
            if (nw == 0.0) break;
            for (index_t j = 0; j < n; ++j) v[j] = w[j] / nw;
            g.matvec(v, gv);
            double vgv = 0.0;
            for (double z : gv) vgv += z * z;
            const double num = lmax - vgv;
            flat = std::abs(num - mu) <= 1e-13 * std::max(1.0, num) ? flat + 1 : 0;
            mu = num;
        }
        lmin = lmax - mu;
    }
    if (lmin <= tol * lmax) throw RankDeficient("G^T G is singular to tolerance");
    return 6.0 * static_cast<double>(g.rows()) * g.max_row_sq_norm() * (lmax / lmin);
}

// Samples F(alpha x + (1-alpha) y) - max(F(x), F(y)) and returns the largest
// value seen; nonpositive (up to rounding) iff no quasiconvexity violation was
// found. Requires the problem to declare a concave differentiable denominator,
// the hypothesis under which the inequality is provable.
template <class Problem>
double quasiconvexity_probe(const Problem& problem, std::int64_t n_samples, std::uint64_t seed) {
    if (problem.denominator_kind() != DenominatorKind::ConcaveDifferentiable)
        throw ConfigError("quasiconvexity probe needs a concave differentiable denominator");
    const index_t n = problem.dim();
    Rng rng(seed);
    std::vector<double> x(n), y(n), mid(n);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::int64_t s = 0; s < n_samples; ++s) {
        for (index_t j = 0; j < n; ++j) {
            x[j] = rng.normal();
            y[j] = rng.normal();
        }
        const double alpha = rng.uniform();
        for (index_t j = 0; j < n; ++j) mid[j] = alpha * x[j] + (1.0 - alpha) * y[j];
        try {
            const double fx = evaluate_objective(problem, make_state(problem, x));
            const double fy = evaluate_objective(problem, make_state(problem, y));
            const double fm = evaluate_objective(problem, make_state(problem, mid));
            worst = std::max(worst, fm - std::max(fx, fy));
        } catch (const SolverError&) {
            continue;  // zero-denominator sample, measure zero
        }
    }
    return worst;
}

}  // namespace fraccd
