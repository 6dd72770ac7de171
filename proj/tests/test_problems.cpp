#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraccd/cd.hpp"
#include "fraccd/problems/eig_l4.hpp"
#include "fraccd/problems/sparse_recovery.hpp"
#include "fraccd/rng.hpp"
#include "fraccd/scalar/grid_oracle.hpp"
#include "fraccd/synth.hpp"
#include "fraccd/topk.hpp"

using namespace fraccd;

namespace {

std::vector<double> random_vec(Rng& rng, index_t n, double scale = 1.0) {
    std::vector<double> x(n);
    for (auto& v : x) v = scale * rng.normal();
    return x;
}

double sort_oracle_topk(std::vector<double> x, index_t k) {
    for (auto& v : x) v = std::abs(v);
    std::sort(x.begin(), x.end(), std::greater<>());
    return std::accumulate(x.begin(), x.begin() + k, 0.0);
}

}  // namespace

TEST_CASE("topk magnitude sum") {
    std::vector<double> x{1.0, -3.0, 2.0};
    CHECK(topk_magnitude_sum(x, 2) == 5.0);
    CHECK(topk_magnitude_sum(x, 3) == 6.0);  // k = n gives the l1 norm
    CHECK_THROWS_AS(topk_magnitude_sum(x, 0), BadK);
    CHECK_THROWS_AS(topk_magnitude_sum(x, 4), BadK);

    Rng rng(8);
    for (int rep = 0; rep < 500; ++rep) {
        const auto v = random_vec(rng, 1 + static_cast<index_t>(rng.uniform_index(30)));
        const auto k = 1 + static_cast<index_t>(rng.uniform_index(v.size()));
        CHECK(topk_magnitude_sum(v, k) == sort_oracle_topk(v, k));
    }
}

TEST_CASE("topk substitution helper matches direct recomputation") {
    Rng rng(9);
    std::vector<double> scratch;
    for (int rep = 0; rep < 500; ++rep) {
        auto v = random_vec(rng, 2 + static_cast<index_t>(rng.uniform_index(20)));
        const auto k = 1 + static_cast<index_t>(rng.uniform_index(v.size()));
        const auto i = static_cast<index_t>(rng.uniform_index(v.size()));
        const double nv = rng.normal();
        const double sub = topk_magnitude_sum_subst(v, i, nv, k, scratch);
        v[i] = nv;
        CHECK(sub == topk_magnitude_sum(v, k));
    }
}

TEST_CASE("topk subgradient selection") {
    std::vector<double> out(3);
    subgrad_topk(std::vector<double>{2.0, -1.0, 0.0}, 1, out);
    CHECK(out == std::vector<double>{1.0, 0.0, 0.0});

    subgrad_topk(std::vector<double>{0.0, 0.0, 0.0}, 2, out);
    CHECK(out == std::vector<double>{0.0, 0.0, 0.0});  // set-valued branch -> 0

    std::vector<double> out2(2);
    subgrad_topk(std::vector<double>{1.0, 1.0}, 1, out2);
    CHECK(out2 == std::vector<double>{1.0, 0.0});  // tie -> smallest index
}

TEST_CASE("pcd step is zero at a coordinate-wise fixed point") {
    // the per-coordinate solve is a global minimizer, so re-solving the same
    // coordinate at the same lambda must return zero
    const auto inst = synth_sparse_instance(20, 30, 6, 0.1, 61);
    SparseRecoveryProblem::Options opt;
    opt.gamma = 0.1 / 20;
    opt.k = 6;
    const SparseRecoveryProblem problem(inst.g, inst.y, opt);
    Rng rng(62);
    auto s = make_state(problem, random_vec(rng, 30));
    for (int rep = 0; rep < 200; ++rep) {
        const auto i = static_cast<index_t>(rng.uniform_index(30));
        const double lambda = s.objective;
        const double eta = problem.solve_pcd_1d(s, i, lambda, 1e-6);
        problem.apply_step(s, i, eta);
        const double again = problem.solve_pcd_1d(s, i, lambda, 1e-6);
        const double v_zero = problem.pcd_objective_1d(s, i, lambda, 1e-6, 0.0);
        const double v_again = problem.pcd_objective_1d(s, i, lambda, 1e-6, again);
        CHECK(v_zero <= v_again + 1e-9 * std::max(1.0, std::abs(v_zero)));
    }
}

TEST_CASE("pcd step: objective descends and matches the grid oracle") {
    const auto inst = synth_sparse_instance(15, 20, 5, 0.1, 71);
    SparseRecoveryProblem::Options opt;
    opt.gamma = 0.05;
    opt.k = 5;
    const SparseRecoveryProblem problem(inst.g, inst.y, opt);
    Rng rng(72);
    const double theta = 1e-6;
    int oracle_hits = 0;
    for (int rep = 0; rep < 400; ++rep) {
        auto s = make_state(problem, random_vec(rng, 20));
        const double lambda = s.objective;
        const auto i = static_cast<index_t>(rng.uniform_index(20));
        const double eta = problem.solve_pcd_1d(s, i, lambda, theta);

        const auto oracle = grid_oracle_1d(
            [&](double e) { return problem.pcd_objective_1d(s, i, lambda, theta, e); },
            -50.0, 50.0, 2001, 3);
        const double mine = problem.pcd_objective_1d(s, i, lambda, theta, eta);
        if (mine <= oracle.second + 1e-6 * std::max(1.0, std::abs(oracle.second))) ++oracle_hits;

        const double f_prev = s.objective;
        problem.apply_step(s, i, eta);
        CHECK(s.objective <= f_prev + 1e-9 * std::max(1.0, std::abs(f_prev)));
    }
    CHECK(oracle_hits == 400);
}

TEST_CASE("l4 radicand coefficients by binomial expansion") {
    // z = (1), col = (1): (1 + eta)^4 -> (1, 4, 6, 4, 1)
    std::vector<double> one{1.0};
    const auto g = CscMatrix::from_dense(1, 1, one);
    const EigL4Problem problem(g);
    const auto s = make_state(problem, std::vector<double>{1.0});
    const auto rc = problem.fcd_ratio_coeffs(s, 0, 0.0);
    CHECK(rc.b4 == 1.0);
    CHECK(rc.b3 == 4.0);
    CHECK(rc.b2 == 6.0);
    CHECK(rc.b1 == 4.0);
    CHECK(rc.b0 == 1.0);
}

TEST_CASE("l4 radicand: zero column contributes only the cached constant") {
    std::vector<double> d{1.0, 0.0, 2.0, 0.0};  // second column all zero
    const auto g = CscMatrix::from_dense(2, 2, d);
    const EigL4Problem problem(g);
    const auto s = make_state(problem, std::vector<double>{1.0, 0.5});
    const auto rc = problem.fcd_ratio_coeffs(s, 1, 0.0);
    CHECK(rc.b4 == 0.0);
    CHECK(rc.b3 == 0.0);
    CHECK(rc.b2 == 0.0);
    CHECK(rc.b1 == 0.0);
    CHECK(rc.b0 == Catch::Approx(s.z4));
}

TEST_CASE("l4 radicand agrees with pointwise evaluation") {
    Rng rng(81);
    for (int rep = 0; rep < 300; ++rep) {
        const auto inst = synth_eig_instance(8, 5, 8000 + rep);
        const EigL4Problem problem(inst.g);
        const auto s = make_state(problem, random_vec(rng, 5));
        const auto i = static_cast<index_t>(rng.uniform_index(5));
        const auto rc = problem.fcd_ratio_coeffs(s, i, 0.0);
        const auto dense = inst.g.to_dense();
        for (double eta : {-1.0, 0.5, 2.0}) {
            double direct = 0.0;
            for (index_t r = 0; r < 8; ++r) {
                const double zr = s.z[r] + eta * dense[r * 5 + i];
                direct += zr * zr * zr * zr;
            }
            const double poly = ratio_radicand(rc, eta);
            CHECK(poly == Catch::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("fcd step on the identity instance has a fixed point at the axis") {
    const EigL4Problem problem(CscMatrix::identity(2));
    const auto s = make_state(problem, std::vector<double>{1.0, 0.0});
    // along either coordinate the surrogate cannot improve F = 1 (grid-checked)
    for (index_t i = 0; i < 2; ++i) {
        const double eta = problem.solve_fcd_1d(s, i, 1e-6);
        const auto oracle = grid_oracle_1d(
            [&](double e) { return problem.fcd_objective_1d(s, i, 1e-6, e); }, -100, 100, 2001, 3);
        CHECK(problem.fcd_objective_1d(s, i, 1e-6, eta) <=
              oracle.second + 1e-9 * std::max(1.0, std::abs(oracle.second)));
        CHECK(eta == 0.0);
    }
}

TEST_CASE("fcd step: descent and grid-oracle optimality on random instances") {
    Rng rng(91);
    const double theta = 1e-6;
    int oracle_hits = 0;
    for (int rep = 0; rep < 400; ++rep) {
        const auto inst = synth_eig_instance(10, 6, 9100 + rep);
        const EigL4Problem problem(inst.g);
        auto s = make_state(problem, random_vec(rng, 6));
        const auto i = static_cast<index_t>(rng.uniform_index(6));
        const double eta = problem.solve_fcd_1d(s, i, theta);
        const auto oracle = grid_oracle_1d(
            [&](double e) { return problem.fcd_objective_1d(s, i, theta, e); }, -1e3, 1e3, 2001, 3);
        if (problem.fcd_objective_1d(s, i, theta, eta) <=
            oracle.second + 1e-6 * std::max(1.0, std::abs(oracle.second)))
            ++oracle_hits;
        const double f_prev = s.objective;
        problem.apply_step(s, i, eta);
        CHECK(s.objective <= f_prev + 1e-9 * std::max(1.0, std::abs(f_prev)));
    }
    CHECK(oracle_hits == 400);
}

TEST_CASE("unit solution recovery") {
    const auto v = EigL4Problem::recover_unit_solution(std::vector<double>{3.0, 4.0});
    CHECK(v[0] == Catch::Approx(0.6));
    CHECK(v[1] == Catch::Approx(0.8));
    const auto u = EigL4Problem::recover_unit_solution(std::vector<double>{0.0, 1.0});
    CHECK(u == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(EigL4Problem::recover_unit_solution(std::vector<double>{0.0, 0.0}),
                    ZeroVector);
}

TEST_CASE("l4 objective is scale invariant and matches the unit form") {
    Rng rng(101);
    const auto inst = synth_eig_instance(12, 7, 111);
    const EigL4Problem problem(inst.g);
    for (int rep = 0; rep < 200; ++rep) {
        const auto x = random_vec(rng, 7);
        double alpha = 0.0;
        while (std::abs(alpha) < 1e-3) alpha = 3.0 * rng.normal();
        const double fx = make_state(problem, x).objective;
        auto xs = x;
        for (auto& v : xs) v *= alpha;
        const double fs = make_state(problem, xs).objective;
        CHECK(fs == Catch::Approx(fx).epsilon(1e-10));

        // F(x) = 1 / ||G v||_4^2 on the unit representative
        const auto v = EigL4Problem::recover_unit_solution(x);
        const auto sv = make_state(problem, v);
        CHECK(fx == Catch::Approx(1.0 / problem.eval_g(sv)).epsilon(1e-10));
    }
}

TEST_CASE("||Gx||_4^2 satisfies the midpoint convexity inequality") {
    Rng rng(121);
    const auto inst = synth_eig_instance(9, 6, 131);
    const EigL4Problem problem(inst.g);
    auto g_of = [&](const std::vector<double>& x) {
        return problem.eval_g(make_state(problem, x));
    };
    for (int rep = 0; rep < 1000; ++rep) {
        const auto x = random_vec(rng, 6);
        const auto y = random_vec(rng, 6);
        std::vector<double> mid(6);
        for (index_t j = 0; j < 6; ++j) mid[j] = 0.5 * (x[j] + y[j]);
        const double lhs = g_of(mid);
        const double rhs = 0.5 * g_of(x) + 0.5 * g_of(y);
        CHECK(lhs <= rhs + 1e-10 * std::max(1.0, rhs));
    }
}

TEST_CASE("top-k cache equals the sort oracle after every step") {
    const auto inst = synth_sparse_instance(18, 24, 6, 0.1, 141);
    SparseRecoveryProblem::Options opt;
    opt.gamma = 0.02;
    opt.k = 6;
    const SparseRecoveryProblem problem(inst.g, inst.y, opt);
    Rng rng(142);
    auto s = make_state(problem, random_vec(rng, 24));
    for (int step = 0; step < 300; ++step) {
        const auto i = static_cast<index_t>(rng.uniform_index(24));
        const double eta = problem.solve_pcd_1d(s, i, s.objective, 1e-6);
        problem.apply_step(s, i, eta);
        const double oracle = sort_oracle_topk(s.x, 6);
        CHECK(s.topk_sum == Catch::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("unsupported solver pairings are reported") {
    const auto inst = synth_sparse_instance(6, 8, 2, 0.1, 151);
    SparseRecoveryProblem::Options opt;
    opt.gamma = 0.1;
    opt.k = 2;
    const SparseRecoveryProblem sparse(inst.g, inst.y, opt);
    Rng rng(152);
    const auto s = make_state(sparse, random_vec(rng, 8));
    CHECK_THROWS_AS(sparse.solve_fcd_1d(s, 0, 1e-6), UnsupportedVariant);

    const EigL4Problem l4(synth_eig_instance(6, 4, 153).g);
    const auto sl = make_state(l4, random_vec(rng, 4));
    CHECK_THROWS_AS(l4.solve_pcd_1d(sl, 0, 1.0, 1e-6), UnsupportedVariant);
}

TEST_CASE("row-gram curvature compatibility flag") {
    const auto inst = synth_sparse_instance(10, 6, 3, 0.1, 161);
    SparseRecoveryProblem::Options opt;
    opt.gamma = 0.1;
    opt.k = 3;
    opt.row_gram_lipschitz = true;
    const SparseRecoveryProblem problem(inst.g, inst.y, opt);
    const auto dense = inst.g.to_dense();
    for (index_t i = 0; i < 6; ++i) {
        double row_sq = 0.0;
        for (index_t j = 0; j < 6; ++j) row_sq += dense[i * 6 + j] * dense[i * 6 + j];
        CHECK(problem.coord_lipschitz(i) == Catch::Approx(row_sq));
    }
    // fat matrices cannot use the row Gram diagonal
    const auto fat = synth_sparse_instance(4, 9, 2, 0.1, 162);
    CHECK_THROWS_AS(SparseRecoveryProblem(fat.g, fat.y, opt), DimensionMismatch);
}
