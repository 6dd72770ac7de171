#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fraccd/baselines.hpp"
#include "fraccd/cd.hpp"
#include "fraccd/dense.hpp"
#include "fraccd/libsvm.hpp"
#include "fraccd/problems/eig_l4.hpp"
#include "fraccd/problems/ratio1d.hpp"
#include "fraccd/problems/sparse_recovery.hpp"
#include "fraccd/scalar/grid_oracle.hpp"
#include "fraccd/scalar/quartic.hpp"
#include "fraccd/scalar/ratio_min.hpp"
#include "fraccd/stationarity.hpp"
#include "fraccd/synth.hpp"
#include "fraccd/topk.hpp"

namespace fraccd {

struct CheckResult {
    bool pass = true;
    bool informational = false;  // reported but never gates the suite
    std::string detail;
};

struct Check {
    std::string module;
    std::string name;
    std::function<CheckResult()> run;
};

namespace verify_detail {

inline std::vector<double> random_vec(Rng& rng, index_t n, double scale = 1.0) {
    std::vector<double> x(n);
    for (auto& v : x) v = scale * rng.normal();
    return x;
}

inline SparseRecoveryProblem sparse_fixture(std::uint64_t seed, index_t m, index_t n, index_t k) {
    const auto inst = synth_sparse_instance(m, n, k, 0.1, seed);
    SparseRecoveryProblem::Options opt;
    opt.gamma = 0.1 / static_cast<double>(m);
    opt.k = k;
    return SparseRecoveryProblem(inst.g, inst.y, opt);
}

inline CheckResult pass_fail(bool ok, const std::string& detail = "") {
    return {ok, false, detail};
}

}  // namespace verify_detail

// The invariant suite behind `fraccd verify`: every check is deterministic
// and runs inside a desk-scale time budget.
inline std::vector<Check> build_verify_checks() {
    using namespace verify_detail;
    std::vector<Check> checks;

    checks.push_back({"core", "monotone-descent-and-sufficient-decrease-pcd", [] {
        Rng rng(1001);
        const auto problem = sparse_fixture(1, 50, 100, 10);
        SolverConfig cfg;
        cfg.method = Method::Pcd;
        cfg.verify = true;  // throws AssertionFailure on violation
        cfg.max_iters = 5000;
        try {
            const auto run = run_cd(problem, cfg, random_vec(rng, 100));
            double prev = std::numeric_limits<double>::infinity();
            for (const auto& r : run.trace.records) {
                if (r.objective > prev + 1e-9 * std::max(1.0, std::abs(prev)))
                    return pass_fail(false, "objective increased");
                prev = r.objective;
            }
            return pass_fail(true);
        } catch (const AssertionFailure& e) {
            return pass_fail(false, e.what());
        }
    }});

    checks.push_back({"core", "sufficient-decrease-and-alpha-sandwich-fcd", [] {
        Rng rng(1002);
        const EigL4Problem problem(synth_eig_instance(60, 40, 2).g);
        SolverConfig cfg;
        cfg.method = Method::Fcd;
        cfg.verify = true;
        cfg.max_iters = 5000;
        try {
            run_cd(problem, cfg, random_vec(rng, 40));
            return pass_fail(true);
        } catch (const AssertionFailure& e) {
            return pass_fail(false, e.what());
        }
    }});

    checks.push_back({"core", "cache-coherence-10k-steps", [] {
        Rng rng(1003);
        const auto problem = sparse_fixture(3, 40, 60, 10);
        SolverConfig cfg;
        cfg.method = Method::Pcd;
        cfg.max_iters = 10'000;
        cfg.eps = 1e-300;
        cfg.refresh_every = 1'000'000;
        auto run = run_cd(problem, cfg, random_vec(rng, 60));
        const double cached = run.state.objective;
        problem.refresh_caches(run.state);
        const bool ok = std::abs(run.state.objective - cached) <=
                        1e-7 * std::max(1.0, std::abs(cached));
        std::ostringstream d;
        d << "drift " << std::abs(run.state.objective - cached);
        return pass_fail(ok, d.str());
    }});

    checks.push_back({"core", "coordinate-majorization-sampling", [] {
        Rng rng(1004);
        const auto problem = sparse_fixture(4, 12, 18, 5);
        for (int rep = 0; rep < 1000; ++rep) {
            auto x = random_vec(rng, 18);
            auto s = make_state(problem, x);
            const auto i = static_cast<index_t>(rng.uniform_index(18));
            const double eta = 3.0 * rng.normal();
            const double rhs = problem.eval_f(s) + problem.grad_f_coord(s, i) * eta +
                               0.5 * problem.coord_lipschitz(i) * eta * eta;
            x[i] += eta;
            const double lhs = problem.eval_f(make_state(problem, x));
            if (lhs > rhs + 1e-10 * std::max(1.0, std::abs(rhs)))
                return pass_fail(false, "majorization violated");
        }
        return pass_fail(true);
    }});

    checks.push_back({"data", "libsvm-round-trip", [] {
        Rng rng(1011);
        for (int rep = 0; rep < 25; ++rep) {
            MatrixGenOptions opt;
            opt.density = 0.5;
            const auto m = synth_matrix(6, 9, rng, opt);
            std::ostringstream out;
            write_libsvm(out, m);
            std::istringstream in(out.str());
            const auto back = parse_libsvm(in);
            const auto d1 = m.to_dense();
            const auto d2 = back.matrix.to_dense();
            for (index_t i = 0; i < m.rows(); ++i)
                for (index_t j = 0; j < back.matrix.cols(); ++j)
                    if (d1[i * m.cols() + j] != d2[i * back.matrix.cols() + j])
                        return pass_fail(false, "value mismatch");
        }
        return pass_fail(true);
    }});

    checks.push_back({"data", "column-axpy-dense-equivalence", [] {
        Rng rng(1012);
        for (int rep = 0; rep < 1000; ++rep) {
            MatrixGenOptions opt;
            opt.density = 0.6;
            const index_t m = 3 + static_cast<index_t>(rng.uniform_index(8));
            const index_t n = 2 + static_cast<index_t>(rng.uniform_index(8));
            const auto mat = synth_matrix(m, n, rng, opt);
            const auto dense = mat.to_dense();
            const index_t j = static_cast<index_t>(rng.uniform_index(n));
            const double eta = rng.normal();
            auto z = random_vec(rng, m);
            auto zd = z;
            mat.column_axpy(j, eta, z);
            for (index_t i = 0; i < m; ++i) zd[i] += eta * dense[i * n + j];
            for (index_t i = 0; i < m; ++i)
                if (std::abs(z[i] - zd[i]) > 1e-12) return pass_fail(false, "axpy mismatch");
        }
        return pass_fail(true);
    }});

    checks.push_back({"data", "spectral-norm-vs-dense-eig", [] {
        Rng rng(1013);
        for (int rep = 0; rep < 10; ++rep) {
            const auto m = synth_matrix(20, 30, rng);
            const auto ev = sym_eigenvalues(gram_matrix(m), 30);
            const double est = spectral_norm_sq(m, 5000, 1e-10);
            if (est < ev.back() * (1.0 - 1e-8) || est > ev.back() * (1.0 + 1e-6))
                return pass_fail(false, "estimate out of band");
        }
        return pass_fail(true);
    }});

    checks.push_back({"scalar", "quartic-residual-bound", [] {
        Rng rng(1021);
        for (int rep = 0; rep < 10'000; ++rep) {
            QuarticCoeffs q{rng.normal(), rng.normal(), rng.normal(), rng.normal(), rng.normal()};
            const double scale = std::max({std::abs(q.c4), std::abs(q.c3), std::abs(q.c2),
                                           std::abs(q.c1), std::abs(q.c0)});
            for (double r : solve_quartic(q, 1e-10)) {
                const double value = (((q.c4 * r + q.c3) * r + q.c2) * r + q.c1) * r + q.c0;
                if (std::abs(value) > 1e-10 * scale * std::pow(std::max(1.0, std::abs(r)), 4))
                    return pass_fail(false, "residual above bound");
            }
        }
        return pass_fail(true);
    }});

    checks.push_back({"scalar", "eta5-cancellation-integer-exact", [] {
        Rng rng(1022);
        for (int rep = 0; rep < 1000; ++rep) {
            long long a2 = static_cast<long long>(rng.uniform_index(41)) - 20;
            long long d4 = static_cast<long long>(rng.uniform_index(41)) - 20;
            // full integer convolution of the degree-5 coefficient
            const long long c5 = 2 * (2 * a2) * d4 - a2 * (4 * d4);
            if (c5 != 0) return pass_fail(false, "degree-5 coefficient nonzero");
        }
        return pass_fail(true);
    }});

    checks.push_back({"scalar", "breakpoint-solver-vs-grid-oracle", [] {
        Rng rng(1023);
        const auto problem = sparse_fixture(23, 15, 20, 5);
        int misses = 0;
        const int draws = 2000;
        for (int rep = 0; rep < draws; ++rep) {
            auto s = make_state(problem, random_vec(rng, 20));
            const double lambda = s.objective;
            const auto i = static_cast<index_t>(rng.uniform_index(20));
            const double eta = problem.solve_pcd_1d(s, i, lambda, 1e-6);
            const double mine = problem.pcd_objective_1d(s, i, lambda, 1e-6, eta);
            const auto oracle = grid_oracle_1d(
                [&](double e) { return problem.pcd_objective_1d(s, i, lambda, 1e-6, e); }, -50.0,
                50.0, 2001, 3);
            if (mine > oracle.second + 1e-6 * std::max(1.0, std::abs(oracle.second))) ++misses;
        }
        std::ostringstream d;
        d << misses << "/" << draws << " grid misses";
        return pass_fail(misses <= draws / 1000, d.str());
    }});

    checks.push_back({"scalar", "quartic-ratio-solver-vs-grid-oracle", [] {
        Rng rng(1024);
        const EigL4Problem problem(synth_eig_instance(12, 8, 24).g);
        for (int rep = 0; rep < 2000; ++rep) {
            auto s = make_state(problem, random_vec(rng, 8));
            const auto i = static_cast<index_t>(rng.uniform_index(8));
            const double eta = problem.solve_fcd_1d(s, i, 1e-6);
            const double mine = problem.fcd_objective_1d(s, i, 1e-6, eta);
            const auto oracle = grid_oracle_1d(
                [&](double e) { return problem.fcd_objective_1d(s, i, 1e-6, e); }, -1e3, 1e3, 2001,
                3);
            if (mine > oracle.second + 1e-6 * std::max(1.0, std::abs(oracle.second)))
                return pass_fail(false, "ratio solver lost to the oracle");
        }
        return pass_fail(true);
    }});

    checks.push_back({"scalar", "stationarity-roots-zero-derivative", [] {
        Rng rng(1025);
        for (int rep = 0; rep < 300; ++rep) {
            RatioCoeffs rc;
            rc.a2 = 0.5 + rng.uniform();
            rc.a1 = rng.normal();
            rc.a0 = std::abs(rng.normal()) + 0.1;
            for (int j = 0; j < 5; ++j) {
                const double z = rng.normal(), c = rng.normal();
                rc.b4 += c * c * c * c;
                rc.b3 += 4.0 * z * c * c * c;
                rc.b2 += 6.0 * z * z * c * c;
                rc.b1 += 4.0 * z * z * z * c;
                rc.b0 += z * z * z * z;
            }
            for (double r : solve_quartic(ratio_stationarity_coeffs(rc), 1e-10)) {
                if (ratio_radicand(rc, r) <= 1e-6) continue;
                const double h = 1e-6;
                const double der = (eval_ratio(rc, r + h) - eval_ratio(rc, r - h)) / (2.0 * h);
                const double scale =
                    std::max(1.0, std::abs(eval_ratio(rc, r)) / std::max(1.0, std::abs(r)));
                if (std::abs(der) > 1e-4 * scale) return pass_fail(false, "derivative nonzero");
            }
        }
        return pass_fail(true);
    }});

    checks.push_back({"cd", "1d-example-pcd-finds-global-min-from-20-starts", [] {
        const Ratio1DProblem problem;
        for (int i = 0; i < 20; ++i) {
            const double x0 = -5.0 + 8.0 * i / 19.0;
            SolverConfig cfg;
            cfg.method = Method::Pcd;
            cfg.max_iters = 2000;
            const auto run = run_cd(problem, cfg, std::vector<double>{x0});
            if (run.state.objective > 1e-10) return pass_fail(false, "missed the optimum");
        }
        return pass_fail(true);
    }});

    checks.push_back({"cd", "1d-example-pgsa-endpoint-recorded", [] {
        // pgsa stalls at a critical point; recorded for comparison, the strict
        // claim (global convergence) holds only for the coordinate method
        const Ratio1DProblem problem;
        BaselineConfig cfg;
        cfg.algorithm = BaselineAlgorithm::Pgsa;
        cfg.lipschitz = 2.0;
        cfg.max_iters = 5000;
        const auto run = run_pgsa(problem, cfg, std::vector<double>{0.05});
        std::ostringstream d;
        d << "pgsa F " << run.state.objective << " vs pcd F 0";
        CheckResult r;
        r.pass = true;
        r.informational = true;
        r.detail = d.str();
        return r;
    }});

    checks.push_back({"cd", "greedy-direction-zero-at-critical-point", [] {
        const Ratio1DProblem problem;
        const auto s = make_state(problem, std::vector<double>{0.0});
        std::vector<double> d(1);
        greedy_direction(problem, s, 2.0, d);
        return pass_fail(std::abs(d[0]) <= 1e-8, "direction " + std::to_string(d[0]));
    }});

    checks.push_back({"cd", "random-rule-determinism", [] {
        Rng rng(1031);
        const auto problem = sparse_fixture(31, 20, 25, 5);
        const auto x0 = random_vec(rng, 25);
        SolverConfig cfg;
        cfg.method = Method::Pcd;
        cfg.rule = Rule::Random;
        cfg.seed = 77;
        cfg.max_iters = 1500;
        const auto a = run_cd(problem, cfg, x0);
        const auto b = run_cd(problem, cfg, x0);
        if (a.state.x != b.state.x) return pass_fail(false, "states diverged");
        if (a.trace.records.size() != b.trace.records.size())
            return pass_fail(false, "trace lengths diverged");
        for (std::size_t i = 0; i < a.trace.records.size(); ++i)
            if (a.trace.records[i].eta != b.trace.records[i].eta ||
                a.trace.records[i].objective != b.trace.records[i].objective)
                return pass_fail(false, "trace payload diverged");
        return pass_fail(true);
    }});

    checks.push_back({"problems", "l4-scale-invariance", [] {
        Rng rng(1041);
        const EigL4Problem problem(synth_eig_instance(12, 7, 41).g);
        for (int rep = 0; rep < 500; ++rep) {
            const auto x = random_vec(rng, 7);
            double alpha = 0.0;
            while (std::abs(alpha) < 1e-3) alpha = 3.0 * rng.normal();
            auto xs = x;
            for (auto& v : xs) v *= alpha;
            const double fx = make_state(problem, x).objective;
            const double fs = make_state(problem, xs).objective;
            if (std::abs(fx - fs) > 1e-10 * std::max(1.0, std::abs(fx)))
                return pass_fail(false, "not scale invariant");
        }
        return pass_fail(true);
    }});

    checks.push_back({"problems", "l4-denominator-midpoint-convexity", [] {
        Rng rng(1042);
        const EigL4Problem problem(synth_eig_instance(9, 6, 42).g);
        for (int rep = 0; rep < 1000; ++rep) {
            const auto x = random_vec(rng, 6);
            const auto y = random_vec(rng, 6);
            std::vector<double> mid(6);
            for (index_t j = 0; j < 6; ++j) mid[j] = 0.5 * (x[j] + y[j]);
            const double lhs = problem.eval_g(make_state(problem, mid));
            const double rhs = 0.5 * problem.eval_g(make_state(problem, x)) +
                               0.5 * problem.eval_g(make_state(problem, y));
            if (lhs > rhs + 1e-10 * std::max(1.0, rhs))
                return pass_fail(false, "midpoint inequality violated");
        }
        return pass_fail(true);
    }});

    checks.push_back({"problems", "l4-quasiconvexity-probe-measurement", [] {
        // The probe requires a concave differentiable denominator; the l4
        // denominator is convex (see the midpoint check above), and sampled
        // violations are expected. Reported for the record, never gated.
        const EigL4Problem problem(synth_eig_instance(10, 6, 43).g);
        const double worst = quasiconvexity_probe(problem, 10'000, 4343);
        CheckResult r;
        r.pass = true;
        r.informational = true;
        std::ostringstream d;
        d << "max violation " << worst;
        r.detail = d.str();
        return r;
    }});

    checks.push_back({"problems", "topk-cache-matches-sort-oracle", [] {
        Rng rng(1044);
        const auto problem = sparse_fixture(44, 18, 24, 6);
        auto s = make_state(problem, random_vec(rng, 24));
        for (int step = 0; step < 200; ++step) {
            const auto i = static_cast<index_t>(rng.uniform_index(24));
            problem.apply_step(s, i, problem.solve_pcd_1d(s, i, s.objective, 1e-6));
            auto mags = s.x;
            for (auto& v : mags) v = std::abs(v);
            std::sort(mags.begin(), mags.end(), std::greater<>());
            double oracle = 0.0;
            for (index_t j = 0; j < 6; ++j) oracle += mags[j];
            if (std::abs(s.topk_sum - oracle) > 1e-9 * std::max(1.0, oracle))
                return pass_fail(false, "cache drifted from oracle");
        }
        return pass_fail(true);
    }});

    checks.push_back({"baselines", "pgsa-power-trace-equality", [] {
        Rng rng(1051);
        const EigL4Problem problem(synth_eig_instance(30, 20, 51).g);
        auto x0 = random_vec(rng, 20);
        double nrm = 0.0;
        for (double v : x0) nrm += v * v;
        for (auto& v : x0) v /= std::sqrt(nrm);
        BaselineConfig cfg;
        cfg.lipschitz = 2.0;
        cfg.max_iters = 100;
        cfg.window = 1'000'000;
        cfg.eps = 0.0;
        cfg.algorithm = BaselineAlgorithm::Pgsa;
        const auto pg = run_pgsa(problem, cfg, x0);
        cfg.algorithm = BaselineAlgorithm::Power;
        const auto pw = run_power_method(problem, cfg, x0);
        for (std::size_t i = 0; i < pg.trace.records.size(); ++i) {
            const double a = pg.trace.records[i].objective;
            const double b = pw.trace.records[i].objective;
            if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(b)))
                return pass_fail(false, "traces diverged");
        }
        return pass_fail(true);
    }});

    checks.push_back({"baselines", "pgsa-step-equals-greedy-direction-map", [] {
        Rng rng(1052);
        const auto problem = sparse_fixture(52, 20, 30, 6);
        const double lipschitz = spectral_norm_sq(problem.design());
        for (int rep = 0; rep < 25; ++rep) {
            const auto x = random_vec(rng, 30);
            const auto s = make_state(problem, x);
            std::vector<double> d(30);
            greedy_direction(problem, s, lipschitz, d);
            BaselineConfig cfg;
            cfg.algorithm = BaselineAlgorithm::Pgsa;
            cfg.lipschitz = lipschitz;
            cfg.max_iters = 1;
            const auto run = run_pgsa(problem, cfg, x);
            for (index_t j = 0; j < 30; ++j)
                if (std::abs(run.state.x[j] - (x[j] + d[j])) > 1e-14)
                    return pass_fail(false, "maps differ");
        }
        return pass_fail(true);
    }});

    checks.push_back({"stationarity", "1d-example-classification-table", [] {
        const Ratio1DProblem problem;
        const auto a = classify_point(problem, std::vector<double>{-2.0 / 3.0}, 1e-9);
        const auto b = classify_point(problem, std::vector<double>{0.0}, 1e-9);
        const auto c = classify_point(problem, std::vector<double>{-2.0}, 1e-9);
        const bool ok = *a.is_c && !*a.is_d && !*a.is_fcw && !*a.is_pcw && *b.is_c && *b.is_d &&
                        !*b.is_fcw && !*b.is_pcw && *c.is_c && *c.is_d && *c.is_fcw && *c.is_pcw;
        return pass_fail(ok);
    }});

    checks.push_back({"stationarity", "hierarchy-on-random-1d-instances", [] {
        Rng rng(1061);
        for (int rep = 0; rep < 10; ++rep) {
            Ratio1DProblem::Options opt;
            opt.center = 2.0 * rng.normal();
            opt.slope = rng.normal() + (rng.uniform() < 0.5 ? 2.0 : -2.0);
            opt.intercept = rng.normal();
            opt.base = 0.5 + rng.uniform();
            const Ratio1DProblem problem(opt);
            for (int pt = 0; pt < 10; ++pt) {
                const auto cl =
                    classify_point(problem, std::vector<double>{4.0 * rng.normal()}, 1e-9);
                if (*cl.is_fcw != *cl.is_pcw) return pass_fail(false, "fcw/pcw split");
                if (*cl.is_pcw && !*cl.is_d) return pass_fail(false, "pcw without d");
                if (*cl.is_d && !*cl.is_c) return pass_fail(false, "d without c");
            }
        }
        return pass_fail(true);
    }});

    checks.push_back({"stationarity", "rho-bound-closed-forms-and-inequality", [] {
        if (rho_bound_l4(CscMatrix::identity(4)) != 24.0) return pass_fail(false, "identity");
        std::vector<double> d{2.0, 0.0, 0.0, 1.0};
        if (rho_bound_l4(CscMatrix::from_dense(2, 2, d)) != 192.0)
            return pass_fail(false, "diag(2,1)");
        Rng rng(1062);
        const auto inst = synth_eig_instance(12, 6, 62);
        const EigL4Problem problem(inst.g);
        const double rho = rho_bound_l4(inst.g);
        std::vector<double> sgx(6);
        for (int pair = 0; pair < 2000; ++pair) {
            const auto x = random_vec(rng, 6);
            const auto y = random_vec(rng, 6);
            const auto sx = make_state(problem, x);
            problem.subgrad_g(sx, sgx);
            double inner = 0.0, dist_sq = 0.0;
            for (index_t j = 0; j < 6; ++j) {
                inner += -sgx[j] * (x[j] - y[j]);
                dist_sq += (x[j] - y[j]) * (x[j] - y[j]);
            }
            const double lhs = -problem.eval_g(sx);
            const double rhs =
                -problem.eval_g(make_state(problem, y)) + inner + 0.5 * rho * dist_sq;
            if (lhs > rhs + 1e-9 * std::max(1.0, std::abs(rhs)))
                return pass_fail(false, "weak-convexity inequality violated");
        }
        return pass_fail(true);
    }});

    checks.push_back({"stationarity", "pcw-residual-fixed-point-consistency", [] {
        const Ratio1DProblem problem;
        const auto at_min = pcw_residual(problem, std::vector<double>{-2.0}, 1e-12);
        if (at_min.r > 1e-12) return pass_fail(false, "nonzero residual at the optimum");
        const auto away = pcw_residual(problem, std::vector<double>{1.0}, 1e-12);
        return pass_fail(away.r > 0.1, "residual away from optimum " + std::to_string(away.r));
    }});

    return checks;
}

}  // namespace fraccd
