#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fraccd/errors.hpp"

namespace fraccd {

namespace detail {

// Selected magnitudes are summed in descending order so the result is
// bit-identical to a full-sort reference regardless of the partition order.
inline double sum_selected_topk(std::vector<double>& mags, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(mags.size());
    if (k < n) std::nth_element(mags.begin(), mags.begin() + (n - k), mags.end());
    std::sort(mags.begin() + (n - k), mags.end(), std::greater<>());
    double s = 0.0;
    for (std::int64_t i = n - k; i < n; ++i) s += mags[i];
    return s;
}

}  // namespace detail

// Sum of the k largest |x_j| by partial selection; O(n) average. The sum is
// well-defined under ties regardless of which tied entries are selected.
inline double topk_magnitude_sum(std::span<const double> x, std::int64_t k,
                                 std::vector<double>& scratch) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (k < 1 || k > n) throw BadK("k must be in 1..n");
    scratch.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = std::abs(x[i]);
    return detail::sum_selected_topk(scratch, k);
}

inline double topk_magnitude_sum(std::span<const double> x, std::int64_t k) {
    std::vector<double> scratch;
    return topk_magnitude_sum(x, k, scratch);
}

// Same sum with coordinate i replaced by value v, without mutating x.
inline double topk_magnitude_sum_subst(std::span<const double> x, std::int64_t i, double v,
                                       std::int64_t k, std::vector<double>& scratch) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (k < 1 || k > n) throw BadK("k must be in 1..n");
    scratch.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) scratch[j] = std::abs(x[j]);
    scratch[i] = std::abs(v);
    return detail::sum_selected_topk(scratch, k);
}

// Indices of the k largest magnitudes; ties at the k-th magnitude are broken
// toward the smallest index so the selection is deterministic.
inline std::vector<std::int64_t> topk_indices(std::span<const double> x, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (k < 1 || k > n) throw BadK("k must be in 1..n");
    std::vector<std::int64_t> idx(n);
    for (std::int64_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::int64_t a, std::int64_t b) {
        return std::abs(x[a]) > std::abs(x[b]);
    });
    idx.resize(k);
    return idx;
}

// One deterministic element of the subdifferential of sum of k largest |x_j|:
// sign(x_i) on the selected support when x_i != 0, and 0 on the set-valued
// branch (0 is always a valid selection from [-1, 1]).
inline void subgrad_topk(std::span<const double> x, std::int64_t k, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::int64_t i : topk_indices(x, k)) {
        if (x[i] > 0.0)
            out[i] = 1.0;
        else if (x[i] < 0.0)
            out[i] = -1.0;
    }
}

}  // namespace fraccd
