#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "fraccd/errors.hpp"
#include "fraccd/rng.hpp"

namespace fraccd {

using index_t = std::int64_t;

// Column-compressed sparse matrix. Coordinate-descent steps touch a single
// column, so all per-step work is O(nnz(column)).
class CscMatrix {
  public:
    CscMatrix() : rows_(0), cols_(0), col_ptr_(1, 0) {}

    CscMatrix(index_t rows, index_t cols, std::vector<index_t> col_ptr,
              std::vector<index_t> row_idx, std::vector<double> vals)
        : rows_(rows), cols_(cols), col_ptr_(std::move(col_ptr)),
          row_idx_(std::move(row_idx)), vals_(std::move(vals)) {
        validate();
        build_column_caches();
    }

    static CscMatrix from_triplets(index_t rows, index_t cols,
                                   std::vector<std::tuple<index_t, index_t, double>> triplets) {
        std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
            if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
            return std::get<0>(a) < std::get<0>(b);
        });
        std::vector<index_t> cp(cols + 1, 0), ri;
        std::vector<double> v;
        ri.reserve(triplets.size());
        v.reserve(triplets.size());
        for (const auto& [r, c, x] : triplets) {
            if (r < 0 || r >= rows || c < 0 || c >= cols)
                throw DimensionMismatch("triplet outside matrix bounds");
            ++cp[c + 1];
            ri.push_back(r);
            v.push_back(x);
        }
        for (index_t j = 0; j < cols; ++j) cp[j + 1] += cp[j];
        return CscMatrix(rows, cols, std::move(cp), std::move(ri), std::move(v));
    }

    // Dense input in row-major order; zeros are dropped.
    static CscMatrix from_dense(index_t rows, index_t cols, std::span<const double> a) {
        if (static_cast<index_t>(a.size()) != rows * cols)
            throw DimensionMismatch("dense buffer size mismatch");
        std::vector<std::tuple<index_t, index_t, double>> t;
        for (index_t i = 0; i < rows; ++i)
            for (index_t j = 0; j < cols; ++j)
                if (a[i * cols + j] != 0.0) t.emplace_back(i, j, a[i * cols + j]);
        return from_triplets(rows, cols, std::move(t));
    }

    static CscMatrix identity(index_t n) {
        std::vector<std::tuple<index_t, index_t, double>> t;
        for (index_t i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
        return from_triplets(n, n, std::move(t));
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t nnz() const { return static_cast<index_t>(vals_.size()); }

    index_t col_nnz(index_t j) const { return col_ptr_[j + 1] - col_ptr_[j]; }
    std::span<const index_t> col_rows(index_t j) const {
        return {row_idx_.data() + col_ptr_[j], static_cast<std::size_t>(col_nnz(j))};
    }
    std::span<const double> col_vals(index_t j) const {
        return {vals_.data() + col_ptr_[j], static_cast<std::size_t>(col_nnz(j))};
    }

    double col_sq_norm(index_t j) const { return col_sq_norms_[j]; }
    double col_pow4_sum(index_t j) const { return col_pow4_sums_[j]; }

    // z += eta * column_j
    void column_axpy(index_t j, double eta, std::span<double> z) const {
        if (j < 0 || j >= cols_) throw DimensionMismatch("column index out of range");
        if (static_cast<index_t>(z.size()) != rows_) throw DimensionMismatch("vector length != rows");
        if (eta == 0.0) return;
        const auto r = col_rows(j);
        const auto v = col_vals(j);
        for (std::size_t p = 0; p < r.size(); ++p) z[r[p]] += eta * v[p];
    }

    double col_dot(index_t j, std::span<const double> z) const {
        if (static_cast<index_t>(z.size()) != rows_) throw DimensionMismatch("vector length != rows");
        const auto r = col_rows(j);
        const auto v = col_vals(j);
        double s = 0.0;
        for (std::size_t p = 0; p < r.size(); ++p) s += v[p] * z[r[p]];
        return s;
    }

    // y = A x
    void matvec(std::span<const double> x, std::span<double> y) const {
        if (static_cast<index_t>(x.size()) != cols_ || static_cast<index_t>(y.size()) != rows_)
            throw DimensionMismatch("matvec size mismatch");
        std::fill(y.begin(), y.end(), 0.0);
        for (index_t j = 0; j < cols_; ++j) column_axpy(j, x[j], y);
    }

    // y = A^T x
    void matvec_t(std::span<const double> x, std::span<double> y) const {
        if (static_cast<index_t>(x.size()) != rows_ || static_cast<index_t>(y.size()) != cols_)
            throw DimensionMismatch("matvec_t size mismatch");
        for (index_t j = 0; j < cols_; ++j) y[j] = col_dot(j, x);
    }

    std::vector<double> to_dense() const {
        std::vector<double> d(static_cast<std::size_t>(rows_ * cols_), 0.0);
        for (index_t j = 0; j < cols_; ++j) {
            const auto r = col_rows(j);
            const auto v = col_vals(j);
            for (std::size_t p = 0; p < r.size(); ++p) d[r[p] * cols_ + j] = v[p];
        }
        return d;
    }

    double max_row_sq_norm() const {
        std::vector<double> acc(rows_, 0.0);
        for (index_t j = 0; j < cols_; ++j) {
            const auto r = col_rows(j);
            const auto v = col_vals(j);
            for (std::size_t p = 0; p < r.size(); ++p) acc[r[p]] += v[p] * v[p];
        }
        double m = 0.0;
        for (double a : acc) m = std::max(m, a);
        return m;
    }

    bool operator==(const CscMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && col_ptr_ == o.col_ptr_ &&
               row_idx_ == o.row_idx_ && vals_ == o.vals_;
    }

  private:
    void validate() const {
        if (rows_ < 0 || cols_ < 0) throw DimensionMismatch("negative dimension");
        if (static_cast<index_t>(col_ptr_.size()) != cols_ + 1)
            throw DimensionMismatch("column pointer length");
        if (col_ptr_.front() != 0 || col_ptr_.back() != nnz())
            throw DimensionMismatch("column pointers do not cover value array");
        for (index_t j = 0; j < cols_; ++j) {
            if (col_ptr_[j] > col_ptr_[j + 1]) throw DimensionMismatch("column pointers not monotone");
            for (index_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
                if (row_idx_[p] < 0 || row_idx_[p] >= rows_)
                    throw DimensionMismatch("row index out of range");
                if (p > col_ptr_[j] && row_idx_[p] <= row_idx_[p - 1])
                    throw DimensionMismatch("row indices not strictly increasing within column");
                if (!std::isfinite(vals_[p])) throw DimensionMismatch("non-finite value");
            }
        }
    }

    void build_column_caches() {
        col_sq_norms_.assign(cols_, 0.0);
        col_pow4_sums_.assign(cols_, 0.0);
        for (index_t j = 0; j < cols_; ++j) {
            for (double v : col_vals(j)) {
                col_sq_norms_[j] += v * v;
                col_pow4_sums_[j] += v * v * v * v;
            }
        }
    }

    index_t rows_, cols_;
    std::vector<index_t> col_ptr_;
    std::vector<index_t> row_idx_;
    std::vector<double> vals_;
    std::vector<double> col_sq_norms_;
    std::vector<double> col_pow4_sums_;
};

// Largest eigenvalue of G^T G by power iteration, inflated by (1 + 10 tol) so
// a gradient stepsize 1/L derived from it is never too long.
inline double spectral_norm_sq(const CscMatrix& m, int max_iters = 500, double tol = 1e-10) {
    if (m.nnz() == 0) throw ZeroMatrix("spectral norm of an all-zero matrix");
    const index_t n = m.cols();
    std::vector<double> v(n), gv(m.rows()), w(n);
    Rng rng(0x5eedULL);
    for (auto& x : v) x = rng.normal();
    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        m.matvec(v, gv);
        m.matvec_t(gv, w);
        double nw = 0.0;
        for (double x : w) nw += x * x;
        nw = std::sqrt(nw);
        if (nw == 0.0) throw ZeroMatrix("power iteration collapsed to the null space");
        for (index_t j = 0; j < n; ++j) v[j] = w[j] / nw;
        double num = 0.0;
        m.matvec(v, gv);
        for (double x : gv) num += x * x;
        if (std::abs(num - lambda) <= tol * std::max(1.0, num)) {
            lambda = num;
            break;
        }
        lambda = num;
    }
    return lambda * (1.0 + 10.0 * tol);
}

}  // namespace fraccd
