// Order statistics with concomitant censoring flags, the threshold-relative
// top-k view, and tail empirical (sub)distribution functions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ektail/distributions.hpp"
#include "ektail/step_function.hpp"

namespace ektail {

// Sample sorted ascending by z; each delta travels with its z.
struct SortedCensoredSample {
    std::vector<double> z;
    std::vector<std::uint8_t> delta;

    std::size_t size() const noexcept { return z.size(); }
};

inline SortedCensoredSample sort_with_concomitants(const CensoredSample& sample) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("sort_with_concomitants: empty sample");
    if (sample.delta.size() != n)
        throw std::invalid_argument("sort_with_concomitants: z/delta length mismatch");
    for (double z : sample.z)
        if (!(z > 0.0))
            throw std::invalid_argument("sort_with_concomitants: observations must be positive");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return sample.z[a] < sample.z[b]; });
    SortedCensoredSample out;
    out.z.resize(n);
    out.delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.z[i] = sample.z[idx[i]];
        out.delta[i] = sample.delta[idx[i]];
    }
    return out;
}

// The k largest observations relative to the threshold Z_{n-k,n}.
// ratios[i-1] = Z_{n-i+1,n} / Z_{n-k,n} for rank-from-top i = 1..k (descending),
// with the matching censoring flags alongside.
struct TopKView {
    std::size_t k = 0;
    double threshold = 0.0;
    std::vector<double> ratios;        // descending, rank 1 first
    std::vector<std::uint8_t> deltas;  // aligned with ratios
};

inline TopKView top_k_view(const SortedCensoredSample& sorted, std::size_t k) {
    const std::size_t n = sorted.size();
    if (k < 1 || k + 1 > n)
        throw std::invalid_argument("top_k_view: k must satisfy 1 <= k <= n-1");
    TopKView view;
    view.k = k;
    view.threshold = sorted.z[n - k - 1];
    view.ratios.resize(k);
    view.deltas.resize(k);
    for (std::size_t i = 1; i <= k; ++i) {
        view.ratios[i - 1] = sorted.z[n - i] / view.threshold;
        view.deltas[i - 1] = sorted.delta[n - i];
    }
    return view;
}

// Tail empirical distribution function at random levels,
//   s -> (1/k) #{ratios > s},
// restricted to uncensored observations when with_delta is set. The result is
// nonincreasing and right-continuous; the pre-jump value is available through
// StepFunction::left_limit.
inline StepFunction tail_empirical_fn(const TopKView& view, bool with_delta) {
    const double k = static_cast<double>(view.k);
    std::vector<double> pts;
    pts.reserve(view.k);
    for (std::size_t i = 0; i < view.k; ++i)
        if (!with_delta || view.deltas[i]) pts.push_back(view.ratios[i]);
    std::sort(pts.begin(), pts.end());

    std::vector<double> xs, ys;
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    const std::size_t m = pts.size();
    std::size_t consumed = 0;
    while (consumed < m) {
        std::size_t run = consumed;
        while (run < m && pts[run] == pts[consumed]) ++run;
        xs.push_back(pts[consumed]);
        ys.push_back(static_cast<double>(m - run) / k);
        consumed = run;
    }
    // A ratio tied with the threshold sits at exactly 1 and never counts for
    // s >= 1 (strict inequality); it simply becomes a jump at the domain edge.
    return StepFunction(static_cast<double>(m) / k, std::move(xs), std::move(ys));
}

// Empirical tail quantile Z_{n - floor(k t), n} / u_n. The threshold sequence
// u_n must be supplied; it is computable only when the distribution of Z is
// known (simulation studies).
inline double empirical_quantile(const SortedCensoredSample& sorted, std::size_t k,
                                 double t, double u_n) {
    const std::size_t n = sorted.size();
    if (!(u_n > 0.0)) throw std::invalid_argument("empirical_quantile: u_n must be positive");
    const double jt = std::floor(static_cast<double>(k) * t);
    if (!(jt >= 0.0) || jt > static_cast<double>(n - 1))
        throw std::invalid_argument("empirical_quantile: floor(k*t) outside [0, n-1]");
    const std::size_t j = static_cast<std::size_t>(jt);
    return sorted.z[n - 1 - j] / u_n;
}

}  // namespace ektail
