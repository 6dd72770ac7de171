#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fraccd/checks.hpp"
#include "fraccd/config.hpp"
#include "fraccd/errors.hpp"
#include "fraccd/problem.hpp"
#include "fraccd/rng.hpp"
#include "fraccd/trace.hpp"

namespace fraccd {

// Ring buffer over the relative improvements w_t used by the stopping rule.
class StoppingWindow {
  public:
    explicit StoppingWindow(std::int64_t capacity) : buf_(capacity, 0.0) {}

    void push(double w) {
        sum_ -= buf_[pos_];
        buf_[pos_] = w;
        sum_ += w;
        pos_ = (pos_ + 1) % static_cast<std::int64_t>(buf_.size());
        count_ = std::min<std::int64_t>(count_ + 1, static_cast<std::int64_t>(buf_.size()));
        if (++since_resum_ >= 4096) {  // shed accumulated rounding
            sum_ = 0.0;
            for (double v : buf_) sum_ += v;
            since_resum_ = 0;
        }
    }

    std::int64_t size() const { return count_; }
    double mean() const { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }

  private:
    std::vector<double> buf_;
    std::int64_t pos_ = 0;
    std::int64_t count_ = 0;
    std::int64_t since_resum_ = 0;
    double sum_ = 0.0;
};

// mean of the last min(t, capacity) improvements <= eps (inclusive)
inline bool stopping_met(const StoppingWindow& window, double eps) {
    return window.size() > 0 && window.mean() <= eps;
}

// Direction of one proximal gradient-subgradient step, d_j solves
//   min_d <grad_j f - F(x) (dg)_j, d> + (L/2) d^2 + h_j(x_j + d).
// d = 0 exactly at fixed points of that map.
template <class Problem>
void greedy_direction(const Problem& problem, const typename Problem::State& state,
                      double lipschitz, std::span<double> out) {
    if (!problem.has_h_prox()) throw ProxUnavailable("problem has no coordinate prox for h");
    const index_t n = problem.dim();
    std::vector<double> sg(n, 0.0);
    problem.subgrad_g(state, sg);
    for (index_t j = 0; j < n; ++j) {
        const double u = problem.grad_f_coord(state, j) - state.objective * sg[j];
        out[j] = problem.h_prox_coord(state.x[j], u, lipschitz) - state.x[j];
    }
}

inline index_t select_coordinate(Rule rule, std::int64_t t, index_t n, Rng& rng,
                                 std::span<const double> greedy_dir = {}) {
    switch (rule) {
        case Rule::Cyclic:
            return static_cast<index_t>(t % n);
        case Rule::Random:
            return static_cast<index_t>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        default: {
            index_t best = 0;
            double mag = -1.0;
            for (index_t j = 0; j < n; ++j) {
                if (std::abs(greedy_dir[j]) > mag) {
                    mag = std::abs(greedy_dir[j]);
                    best = j;
                }
            }
            return best;
        }
    }
}

template <class Problem>
struct RunResult {
    typename Problem::State state;
    Trace trace;
};

// The coordinate-descent driver: select a coordinate, solve the respective
// one-dimensional subproblem globally, take the step. The parametric variant
// snapshots F(x^t) before the step; the fractional variant optimizes the
// majorized ratio directly. StopReason::Converged means the windowed mean of
// w_t = [F(x^t) - F(x^{t+1})] / max(1, F(x^t)) fell to eps; the stopping rule
// is consulted once the window has filled so a flat first coordinate cannot
// end the run prematurely.
template <class Problem>
RunResult<Problem> run_cd(const Problem& problem, const SolverConfig& config,
                          std::span<const double> x0) {
    config.validate();
    const index_t n = problem.dim();
    auto state = make_state(problem, x0);
    Rng rng(config.seed);

    RunResult<Problem> result{std::move(state), {}};
    auto& s = result.state;
    Trace& trace = result.trace;
    trace.seed = config.seed;
    trace.status = StopReason::IterBudget;

    const double f0 = s.objective;
    double c_max = 0.0;
    for (index_t j = 0; j < n; ++j) c_max = std::max(c_max, problem.coord_lipschitz(j));

    StoppingWindow window(config.window);
    std::vector<double> dir(config.rule == Rule::Greedy ? n : 0);
    std::vector<double> x_after;  // verify-mode scratch

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    std::int64_t t = 0;
    for (; t < config.max_iters; ++t) {
        if (t % 64 == 0 && elapsed() > config.max_time_s) {
            trace.status = StopReason::TimeBudget;
            break;
        }
        if (config.rule == Rule::Greedy)
            greedy_direction(problem, s, config.greedy_lipschitz, dir);
        const index_t i = select_coordinate(config.rule, t, n, rng, dir);

        const double f_prev = s.objective;  // doubles as the parametric lambda^t
        const double eta = config.method == Method::Pcd
                               ? problem.solve_pcd_1d(s, i, f_prev, config.theta)
                               : problem.solve_fcd_1d(s, i, config.theta);

        double surrogate_num = 0.0;
        if (config.verify && config.method == Method::Fcd) {
            // J(x^t, eta) before the step, for the alpha sandwich below
            x_after.assign(s.x.begin(), s.x.end());
            x_after[i] += eta;
            surrogate_num = problem.eval_f(s) + problem.grad_f_coord(s, i) * eta +
                            0.5 * (problem.coord_lipschitz(i) + config.theta) * eta * eta +
                            problem.eval_h(x_after);
        }

        problem.apply_step(s, i, eta);
        if (s.steps_since_refresh >= config.refresh_every) problem.refresh_caches(s);
        const double f_next = s.objective;

        if (config.verify) {
            const double tol = 1e-9 * std::max(1.0, std::abs(f_prev));
            const double g_next = problem.eval_g(s);
            if (!check_sufficient_decrease(f_prev, f_next, g_next, eta * eta, config.theta, tol))
                throw AssertionFailure(t, "sufficient decrease violated (F " +
                                              std::to_string(f_prev) + " -> " +
                                              std::to_string(f_next) + ")");
            if (config.method == Method::Fcd) {
                const double alpha = surrogate_num / g_next;
                if (!alpha_sandwich_check(alpha, f_next, f_prev, f0, c_max, config.theta, tol))
                    throw AssertionFailure(t, "alpha sandwich violated (alpha " +
                                                  std::to_string(alpha) + ")");
            }
        }

        const double w = (f_prev - f_next) / std::max(1.0, f_prev);
        window.push(w);
        if (t % config.trace_every == 0)
            trace.records.push_back({t, i, eta, f_next, elapsed()});

        if (t + 1 >= config.window && stopping_met(window, config.eps)) {
            trace.status = StopReason::Converged;
            ++t;
            break;
        }
    }

    trace.iterations = t;
    trace.final_objective = s.objective;
    trace.elapsed_s = elapsed();
    return result;
}

}  // namespace fraccd
