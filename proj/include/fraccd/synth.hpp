#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fraccd/csc_matrix.hpp"
#include "fraccd/errors.hpp"
#include "fraccd/rng.hpp"

namespace fraccd {

struct Instance {
    CscMatrix g;
    std::vector<double> y;              // empty for the eigenvalue problem
    std::optional<std::vector<double>> x_true;
    std::string name;
    std::uint64_t seed = 0;
    double noise_level = 0.0;
};

struct MatrixGenOptions {
    double density = 1.0;   // Bernoulli keep-probability; 1 = dense
    bool nonnegative = false;  // |entries|, tf-idf-like corpora have no sign
};

// Standard-normal entries, optionally Bernoulli-sparsified. Columns are kept
// nonempty so that per-coordinate curvature stays positive.
inline CscMatrix synth_matrix(index_t m, index_t n, Rng& rng, const MatrixGenOptions& opt = {}) {
    if (m <= 0 || n <= 0) throw BadDimensions("matrix dimensions must be positive");
    std::vector<std::tuple<index_t, index_t, double>> t;
    for (index_t i = 0; i < m; ++i) {
        for (index_t j = 0; j < n; ++j) {
            const double v = rng.normal();
            const bool keep = opt.density >= 1.0 || rng.uniform() < opt.density;
            if (keep) t.emplace_back(i, j, opt.nonnegative ? std::abs(v) : v);
        }
    }
    auto mat = CscMatrix::from_triplets(m, n, std::move(t));
    for (index_t j = 0; j < n; ++j) {
        if (mat.col_nnz(j) == 0) {
            // re-draw a single entry for the empty column
            std::vector<std::tuple<index_t, index_t, double>> extra;
            for (index_t jj = 0; jj < n; ++jj) {
                const auto r = mat.col_rows(jj);
                const auto v = mat.col_vals(jj);
                for (std::size_t p = 0; p < r.size(); ++p) extra.emplace_back(r[p], jj, v[p]);
            }
            for (index_t jj = 0; jj < n; ++jj)
                if (mat.col_nnz(jj) == 0) {
                    const double v = rng.normal();
                    extra.emplace_back(static_cast<index_t>(rng.uniform_index(m)), jj,
                                       opt.nonnegative ? std::abs(v) : v);
                }
            mat = CscMatrix::from_triplets(m, n, std::move(extra));
            break;
        }
    }
    return mat;
}

// Planted k-sparse signal: support entries are standard normal and
// y = G xbar + noise_level * ||G xbar|| * randn(m).
inline Instance synth_sparse_instance(index_t m, index_t n, index_t support_size,
                                      double noise_level, std::uint64_t seed,
                                      const MatrixGenOptions& opt = {}) {
    if (support_size < 0 || support_size > n) throw BadDimensions("support size exceeds dimension");
    if (noise_level < 0) throw BadDimensions("negative noise level");
    Rng rng(seed);
    Instance inst;
    inst.g = synth_matrix(m, n, rng, opt);
    std::vector<double> xbar(n, 0.0);
    // sample the support without replacement
    std::vector<index_t> idx(n);
    for (index_t j = 0; j < n; ++j) idx[j] = j;
    for (index_t j = 0; j < support_size; ++j) {
        const index_t pick = j + static_cast<index_t>(rng.uniform_index(n - j));
        std::swap(idx[j], idx[pick]);
        xbar[idx[j]] = rng.normal();
    }
    std::vector<double> gx(m, 0.0);
    inst.g.matvec(xbar, gx);
    double norm_gx = 0.0;
    for (double v : gx) norm_gx += v * v;
    norm_gx = std::sqrt(norm_gx);
    inst.y.resize(m);
    for (index_t i = 0; i < m; ++i) inst.y[i] = gx[i] + noise_level * norm_gx * rng.normal();
    inst.x_true = std::move(xbar);
    inst.seed = seed;
    inst.noise_level = noise_level;
    inst.name = "synth-" + std::to_string(m) + "x" + std::to_string(n) + "-s" +
                std::to_string(support_size) + "-seed" + std::to_string(seed);
    return inst;
}

inline Instance synth_eig_instance(index_t m, index_t n, std::uint64_t seed,
                                   const MatrixGenOptions& opt = {}) {
    Rng rng(seed);
    Instance inst;
    inst.g = synth_matrix(m, n, rng, opt);
    inst.seed = seed;
    inst.name = "synth-eig-" + std::to_string(m) + "x" + std::to_string(n) + "-seed" +
                std::to_string(seed);
    return inst;
}

}  // namespace fraccd
