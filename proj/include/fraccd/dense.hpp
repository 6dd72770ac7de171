#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fraccd/csc_matrix.hpp"

namespace fraccd {

// n x n Gram matrix G^T G, row-major.
inline std::vector<double> gram_matrix(const CscMatrix& g) {
    const index_t n = g.cols();
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> col(g.rows());
    for (index_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        g.column_axpy(j, 1.0, col);
        for (index_t i = j; i < n; ++i) {
            const double d = g.col_dot(i, col);
            a[i * n + j] = d;
            a[j * n + i] = d;
        }
    }
    return a;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
// Intended for the desk-scale diagnostics (n <= a few hundred).
inline std::vector<double> sym_eigenvalues(std::vector<double> a, index_t n, int max_sweeps = 64) {
    auto at = [&](index_t i, index_t j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (index_t i = 0; i < n; ++i)
            for (index_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off <= 1e-30) break;
        for (index_t p = 0; p < n; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p), aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau)));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (index_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (index_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace fraccd
