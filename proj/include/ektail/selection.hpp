// Sample-fraction selection: the fixed-fraction rule and the largest-k rules
// driven by the extreme goodness-of-fit statistics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ektail/gof.hpp"
#include "ektail/parallel.hpp"
#include "ektail/tail_empirical.hpp"

namespace ektail {

enum class SelectionRule { RoT, KS, CvM };

inline const char* rule_name(SelectionRule r) noexcept {
    switch (r) {
        case SelectionRule::RoT: return "rot";
        case SelectionRule::KS: return "ks";
        case SelectionRule::CvM: return "cvm";
    }
    return "?";
}

// Rule of thumb: k = floor(0.2 n).
inline std::size_t select_rot(std::size_t n) {
    if (n < 10) throw std::invalid_argument("select_rot: n must be >= 10");
    return n / 5;
}

struct SelectionConfig {
    SelectionRule rule = SelectionRule::KS;
    double L = 1.5;                  // threshold; unused for RoT
    std::size_t k_min = 20;
    std::size_t k_max = 0;           // 0 resolves to floor(n/2)
    std::size_t k_step = 1;
    double fallback_fraction = 0.2;  // k when no scanned k passes
    bool full_trace = false;         // evaluate the whole grid, not just the scan
    unsigned threads = 1;            // used by the full-trace evaluation
};

struct TracePoint {
    std::size_t k;
    double statistic;
    double gamma_hat;
};

struct SelectionResult {
    std::size_t k_selected = 0;
    double gamma_hat = 0.0;
    bool used_fallback = false;
    SelectionRule rule = SelectionRule::KS;
    double L = 0.0;
    std::vector<TracePoint> trace;  // ascending in k; covers the evaluated ks
};

namespace detail {

inline std::size_t resolve_k_max(const SelectionConfig& config, std::size_t n) {
    const std::size_t k_max = config.k_max == 0 ? n / 2 : config.k_max;
    if (config.k_min < 2 || k_max + 1 > n || config.k_min > k_max)
        throw std::invalid_argument("selection: need 2 <= k_min <= k_max <= n-1");
    if (config.k_step == 0 || config.k_step > n)
        throw std::invalid_argument("selection: k_step must lie in [1, n]");
    return k_max;
}

inline double statistic_of(const GofResult& g, SelectionRule rule) {
    return rule == SelectionRule::CvM ? g.cvm : g.ks;
}

// Descending candidate grid k_max, k_max - step, ..., down to >= k_min.
inline std::vector<std::size_t> candidate_grid(std::size_t k_min, std::size_t k_max,
                                               std::size_t step) {
    std::vector<std::size_t> ks;
    for (std::size_t k = k_max;; k -= step) {
        ks.push_back(k);
        if (k < k_min + step) break;
    }
    return ks;
}

}  // namespace detail

// Largest scanned k whose statistic falls strictly below L; falls back to
// floor(fallback_fraction * n) when no candidate passes. The statistic and
// the plug-in gamma_hat are recomputed at every candidate.
inline SelectionResult select_gof(const SortedCensoredSample& sorted,
                                  const SelectionConfig& config) {
    const std::size_t n = sorted.size();
    SelectionResult result;
    result.rule = config.rule;
    result.L = config.L;

    if (config.rule == SelectionRule::RoT) {
        result.k_selected = select_rot(n);
        result.gamma_hat = censored_hill(top_k_view(sorted, result.k_selected));
        return result;
    }

    const std::size_t k_max = detail::resolve_k_max(config, n);
    const std::vector<std::size_t> grid =
        detail::candidate_grid(config.k_min, k_max, config.k_step);

    std::size_t chosen = 0;
    bool found = false;
    if (config.full_trace) {
        std::vector<GofResult> all(grid.size());
        parallel_for(grid.size(), config.threads,
                     [&](std::size_t i) { all[i] = gof_at_k(sorted, grid[i]); });
        for (std::size_t i = 0; i < grid.size(); ++i) {
            result.trace.push_back(
                {grid[i], detail::statistic_of(all[i], config.rule), all[i].gamma_hat});
            if (!found && detail::statistic_of(all[i], config.rule) < config.L) {
                chosen = i;
                found = true;
            }
        }
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const GofResult g = gof_at_k(sorted, grid[i]);
            result.trace.push_back({grid[i], detail::statistic_of(g, config.rule), g.gamma_hat});
            if (detail::statistic_of(g, config.rule) < config.L) {
                chosen = i;
                found = true;
                break;
            }
        }
    }
    std::reverse(result.trace.begin(), result.trace.end());

    if (found) {
        result.k_selected = grid[chosen];
        result.gamma_hat = censored_hill(top_k_view(sorted, result.k_selected));
        return result;
    }
    result.used_fallback = true;
    const double fk = std::floor(config.fallback_fraction * static_cast<double>(n));
    if (!(fk >= 1.0) || fk > static_cast<double>(n - 1))
        throw std::invalid_argument("select_gof: fallback k outside [1, n-1]");
    result.k_selected = static_cast<std::size_t>(fk);
    result.gamma_hat = censored_hill(top_k_view(sorted, result.k_selected));
    return result;
}

inline SelectionResult select_gof(const CensoredSample& sample, const SelectionConfig& config) {
    return select_gof(sort_with_concomitants(sample), config);
}

}  // namespace ektail
