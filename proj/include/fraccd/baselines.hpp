#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fraccd/cd.hpp"
#include "fraccd/config.hpp"
#include "fraccd/errors.hpp"
#include "fraccd/problems/eig_l4.hpp"
#include "fraccd/problems/sparse_recovery.hpp"
#include "fraccd/topk.hpp"
#include "fraccd/trace.hpp"

namespace fraccd {

enum class BaselineAlgorithm { Dpa, Pgsa, Qtpa, Power };

inline const char* to_string(BaselineAlgorithm a) {
    switch (a) {
        case BaselineAlgorithm::Dpa: return "dpa";
        case BaselineAlgorithm::Pgsa: return "pgsa";
        case BaselineAlgorithm::Qtpa: return "qtpa";
        default: return "power";
    }
}

struct BaselineConfig {
    BaselineAlgorithm algorithm = BaselineAlgorithm::Pgsa;
    std::int64_t inner_iters = 50;  // parametric inner budget
    double lipschitz = 0.0;         // L = ||G||_2^2 where required
    double eps = 1e-10;
    std::int64_t window = 500;
    double max_time_s = 100.0;
    std::int64_t max_iters = 100'000;
    std::uint64_t seed = 0;
    std::int64_t trace_every = 1;

    void validate() const {
        if (inner_iters < 1) throw ConfigError("inner_iters must be >= 1");
        if (window < 1) throw ConfigError("window must be >= 1");
    }
};

inline double soft_threshold(double v, double lam) {
    return std::copysign(std::max(std::abs(v) - lam, 0.0), v);
}

namespace detail {

struct BaselineLoop {
    explicit BaselineLoop(const BaselineConfig& cfg)
        : cfg(cfg), window(cfg.window), t_start(std::chrono::steady_clock::now()) {
        trace.seed = cfg.seed;
        trace.status = StopReason::IterBudget;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    }

    // returns true while the loop should continue
    bool step(std::int64_t t, double f_prev, double f_next, std::int64_t coord = -1,
              double eta = 0.0) {
        const double w = (f_prev - f_next) / std::max(1.0, f_prev);
        window.push(w);
        if (t % cfg.trace_every == 0) trace.records.push_back({t, coord, eta, f_next, elapsed()});
        if (t + 1 >= cfg.window && stopping_met(window, cfg.eps)) {
            trace.status = StopReason::Converged;
            return false;
        }
        if ((t & 63) == 0 && elapsed() > cfg.max_time_s) {
            trace.status = StopReason::TimeBudget;
            return false;
        }
        return true;
    }

    void finish(std::int64_t iters, double final_f) {
        trace.iterations = iters;
        trace.final_objective = final_f;
        trace.elapsed_s = elapsed();
    }

    const BaselineConfig& cfg;
    StoppingWindow window;
    Trace trace;
    std::chrono::steady_clock::time_point t_start;
};

}  // namespace detail

// Proximal gradient-subgradient iteration (the generic C-point method):
//   x+ = prox_{h/L}( x - (grad f(x) - F(x) dg(x)) / L ).
// Works for any problem with a coordinate prox for h; with h = 0 and L equal
// to the gradient Lipschitz constant this reduces to the closed-form update
// x+ = F(x)/2 * dg(x) for the l4 problem.
template <class Problem>
RunResult<Problem> run_pgsa(const Problem& problem, const BaselineConfig& config,
                            std::span<const double> x0) {
    config.validate();
    if (!problem.has_h_prox()) throw ProxUnavailable("pgsa needs a coordinate prox for h");
    if (!(config.lipschitz > 0.0)) throw ConfigError("pgsa needs L > 0");
    const index_t n = problem.dim();
    RunResult<Problem> result{make_state(problem, x0), {}};
    auto& s = result.state;

    detail::BaselineLoop loop(config);
    std::vector<double> sg(n), xn(n);
    std::int64_t t = 0;
    for (; t < config.max_iters; ++t) {
        const double f_prev = s.objective;
        problem.subgrad_g(s, sg);
        for (index_t j = 0; j < n; ++j) {
            const double u = problem.grad_f_coord(s, j) - f_prev * sg[j];
            xn[j] = problem.h_prox_coord(s.x[j], u, config.lipschitz);
        }
        if (problem.scale_invariant()) {
            double nsq = 0.0;
            for (double v : xn) nsq += v * v;
            if (nsq > 1e60 || (nsq > 0.0 && nsq < 1e-60)) {
                const double inv = 1.0 / std::sqrt(nsq);
                for (double& v : xn) v *= inv;
            }
        }
        s = make_state(problem, xn);
        if (!loop.step(t, f_prev, s.objective)) {
            ++t;
            break;
        }
    }
    loop.finish(t, s.objective);
    result.trace = std::move(loop.trace);
    return result;
}

// Kurtosis power iteration on the unit sphere; the iterate follows the
// gradient direction of ||Gv||_4^4 and is renormalized every step. Produces
// the same objective sequence as PGSA on the l4 problem (the two updates
// differ by a positive scale and F is scale invariant).
inline RunResult<EigL4Problem> run_power_method(const EigL4Problem& problem,
                                                const BaselineConfig& config,
                                                std::span<const double> x0) {
    config.validate();
    const index_t n = problem.dim();
    std::vector<double> x(x0.begin(), x0.end());
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    if (!(nrm > 0.0)) throw ZeroVector("power method needs a nonzero start");
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;

    RunResult<EigL4Problem> result{make_state(problem, x), {}};
    auto& s = result.state;
    const auto& g = problem.design();

    detail::BaselineLoop loop(config);
    std::vector<double> zc(g.rows()), w(n);
    std::int64_t t = 0;
    for (; t < config.max_iters; ++t) {
        const double f_prev = s.objective;
        for (index_t r = 0; r < g.rows(); ++r) zc[r] = s.z[r] * s.z[r] * s.z[r];
        g.matvec_t(zc, w);
        double wn = 0.0;
        for (double v : w) wn += v * v;
        if (!(wn > 0.0)) throw ZeroGradient("G^T (Gx)^3 vanished");
        wn = std::sqrt(wn);
        for (index_t j = 0; j < n; ++j) x[j] = w[j] / wn;
        s = make_state(problem, x);
        if (!loop.step(t, f_prev, s.objective)) {
            ++t;
            break;
        }
    }
    loop.finish(t, s.objective);
    result.trace = std::move(loop.trace);
    return result;
}

// Dinkelbach iteration with the linearized denominator: the inner problem
//   min_v 0.5||Gv - y||^2 + gamma ||v||_1 - lambda <v - x, dg(x)>
// is convex and solved by a monotone FISTA (the best inner iterate by inner
// objective is kept, which preserves the outer descent argument).
inline RunResult<SparseRecoveryProblem> run_dpa(const SparseRecoveryProblem& problem,
                                                const BaselineConfig& config,
                                                std::span<const double> x0) {
    config.validate();
    if (!(config.lipschitz > 0.0)) throw ConfigError("dpa needs L > 0");
    const index_t n = problem.dim();
    const auto& g = problem.design();
    const auto y = problem.observations();
    const double gamma = problem.options().gamma;
    const double vt = problem.options().vartheta;
    const double L = config.lipschitz;

    RunResult<SparseRecoveryProblem> result{make_state(problem, x0), {}};
    auto& s = result.state;

    detail::BaselineLoop loop(config);
    std::vector<double> sg(n), v(n), vy(n), vn(n), grad(n), resid(g.rows()), best_v(n);
    auto inner_value = [&](const std::vector<double>& p, double lambda,
                           const std::vector<double>& anchor) {
        g.matvec(p, resid);
        double fv = 0.0;
        for (index_t r = 0; r < g.rows(); ++r) {
            const double d = resid[r] - y[r];
            fv += d * d;
        }
        fv *= 0.5;
        double l1 = 0.0, lin = 0.0;
        for (index_t j = 0; j < n; ++j) {
            l1 += std::abs(p[j]);
            lin += (p[j] - anchor[j]) * sg[j];
        }
        return fv + gamma * l1 - lambda * lin;
    };

    std::int64_t t = 0;
    for (; t < config.max_iters; ++t) {
        const double f_prev = s.objective;
        const double lambda = f_prev;
        problem.subgrad_g(s, sg);

        v.assign(s.x.begin(), s.x.end());
        vy = v;
        double tk = 1.0;
        double best_val = inner_value(v, lambda, s.x);
        best_v = v;
        for (std::int64_t it = 0; it < config.inner_iters; ++it) {
            g.matvec(vy, resid);
            for (index_t r = 0; r < g.rows(); ++r) resid[r] -= y[r];
            g.matvec_t(resid, grad);
            double change = 0.0, scale = 0.0;
            for (index_t j = 0; j < n; ++j) {
                const double step = vy[j] - (grad[j] - lambda * sg[j]) / L;
                double nj = soft_threshold(step, gamma / L);
                if (std::isfinite(vt)) nj = std::clamp(nj, -vt, vt);
                change += (nj - v[j]) * (nj - v[j]);
                scale += nj * nj;
                vn[j] = nj;
            }
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
            for (index_t j = 0; j < n; ++j) vy[j] = vn[j] + ((tk - 1.0) / tn) * (vn[j] - v[j]);
            std::swap(v, vn);
            tk = tn;
            const double val = inner_value(v, lambda, s.x);
            if (val < best_val) {
                best_val = val;
                best_v = v;
            }
            if (change <= 1e-18 * std::max(1.0, scale)) break;  // relative change <= 1e-9
        }
        s = make_state(problem, best_v);
        if (!loop.step(t, f_prev, s.objective)) {
            ++t;
            break;
        }
    }
    loop.finish(t, s.objective);
    result.trace = std::move(loop.trace);
    return result;
}

// Quadratic-transform iteration: refresh beta = sqrt(g)/(f+h), then one prox
// step on f + h - 2 beta^{-1} sqrt(g) with the linearized square-root term,
// d(sqrt g) = g^{-1/2}/2 * dg.
inline RunResult<SparseRecoveryProblem> run_qtpa(const SparseRecoveryProblem& problem,
                                                 const BaselineConfig& config,
                                                 std::span<const double> x0) {
    config.validate();
    if (!(config.lipschitz > 0.0)) throw ConfigError("qtpa needs L > 0");
    const index_t n = problem.dim();
    const double gamma = problem.options().gamma;
    const double vt = problem.options().vartheta;
    const double L = config.lipschitz;

    RunResult<SparseRecoveryProblem> result{make_state(problem, x0), {}};
    auto& s = result.state;

    detail::BaselineLoop loop(config);
    std::vector<double> sg(n), xn(n);
    std::int64_t t = 0;
    for (; t < config.max_iters; ++t) {
        const double f_prev = s.objective;
        const double gx = problem.eval_g(s);
        if (!(gx > 0.0)) throw NonPositiveDenominator("qtpa requires g(x) > 0");
        const double fh = problem.eval_f(s) + problem.eval_h(s.x);
        const double beta = std::sqrt(gx) / fh;
        problem.subgrad_g(s, sg);
        for (index_t j = 0; j < n; ++j) {
            const double breve = 0.5 / std::sqrt(gx) * sg[j];
            const double u = problem.grad_f_coord(s, j) - 2.0 / beta * breve;
            double nj = soft_threshold(s.x[j] - u / L, gamma / L);
            if (std::isfinite(vt)) nj = std::clamp(nj, -vt, vt);
            xn[j] = nj;
        }
        s = make_state(problem, xn);
        if (!loop.step(t, f_prev, s.objective)) {
            ++t;
            break;
        }
    }
    loop.finish(t, s.objective);
    result.trace = std::move(loop.trace);
    return result;
}

}  // namespace fraccd
