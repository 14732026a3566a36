// Seeded, parallel experiment harness: finite-sample bias/variance curves for
// the hazard and distribution estimators, and selection-rule MSE tables.
// Per-replication seeds are pure functions of (master_seed, rep), and
// reductions run over replication-indexed storage, so results are bit-identical
// for any worker count.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ektail/distributions.hpp"
#include "ektail/estimators.hpp"
#include "ektail/limit_process.hpp"
#include "ektail/parallel.hpp"
#include "ektail/selection.hpp"
#include "ektail/tail_empirical.hpp"

namespace ektail {

struct ExperimentSpec {
    DistributionSpec dist_x = DistributionSpec::pareto(0.5);
    DistributionSpec dist_y = DistributionSpec::pareto(1.5);
    std::size_t n = 10000;
    std::size_t reps = 500;
    std::uint64_t master_seed = 1;
    std::vector<double> s_list = {2.0, 4.0};
    std::vector<std::size_t> k_grid;  // empty resolves to a geometric grid
    unsigned threads = 0;             // 0 = hardware concurrency
};

// Geometric grid of `points` values from k_lo to k_hi (inclusive, deduplicated).
inline std::vector<std::size_t> geometric_k_grid(std::size_t k_lo, std::size_t k_hi,
                                                 std::size_t points) {
    if (k_lo < 1 || k_hi < k_lo || points < 1)
        throw std::invalid_argument("geometric_k_grid: invalid range");
    std::vector<std::size_t> grid;
    const double ratio = static_cast<double>(k_hi) / static_cast<double>(k_lo);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        const auto k = static_cast<std::size_t>(std::llround(k_lo * std::pow(ratio, f)));
        if (grid.empty() || k > grid.back()) grid.push_back(k);
    }
    return grid;
}

namespace detail {

inline void validate_spec(const ExperimentSpec& spec) {
    if (spec.reps < 1) throw std::invalid_argument("ExperimentSpec: reps must be >= 1");
    if (spec.n < 100) throw std::invalid_argument("ExperimentSpec: n must be >= 100");
    for (double s : spec.s_list)
        if (!(s > 1.0)) throw std::invalid_argument("ExperimentSpec: s_list values must exceed 1");
}

inline std::vector<std::size_t> resolve_k_grid(const ExperimentSpec& spec) {
    if (!spec.k_grid.empty()) {
        for (std::size_t k : spec.k_grid)
            if (k < 1 || k + 1 > spec.n)
                throw std::invalid_argument("ExperimentSpec: k_grid entry outside [1, n-1]");
        return spec.k_grid;
    }
    return geometric_k_grid(50, spec.n / 2, 30);
}

struct MeanVar {
    double mean = 0.0;
    double variance = std::numeric_limits<double>::quiet_NaN();  // NaN when reps < 2
};

// Two-pass moments over replication-ordered values.
inline MeanVar mean_var(std::span<const double> v) {
    MeanVar mv;
    long double s = 0.0L;
    for (double x : v) s += x;
    mv.mean = static_cast<double>(s / static_cast<long double>(v.size()));
    if (v.size() >= 2) {
        long double q = 0.0L;
        for (double x : v) {
            const long double d = x - mv.mean;
            q += d * d;
        }
        mv.variance = static_cast<double>(q / static_cast<long double>(v.size() - 1));
    }
    return mv;
}

}  // namespace detail

// Centered, sqrt(k)-scaled finite-sample moments of the hazard and
// distribution estimators at the evaluation points, with the closed-form
// limit variances attached for reference.
struct FiniteSampleCurves {
    std::vector<std::size_t> k_grid;
    std::vector<double> s_list;
    std::size_t reps = 0;
    // indexed [s][k]
    std::vector<std::vector<double>> ena_mean, ena_var, ekm_mean, ekm_var;
    // indexed [s]
    std::vector<double> ena_ref_var, ekm_ref_var;
};

inline FiniteSampleCurves finite_sample_study(const ExperimentSpec& spec) {
    detail::validate_spec(spec);
    const auto k_grid = detail::resolve_k_grid(spec);
    const TailParams params = tail_params(spec.dist_x.gamma, spec.dist_y.gamma);
    const std::size_t nk = k_grid.size(), ns = spec.s_list.size();

    // raw[rep] holds (ena, ekm) pairs flattened over (s, k)
    std::vector<std::vector<double>> raw(spec.reps, std::vector<double>(2 * nk * ns));
    parallel_for(spec.reps, spec.threads, [&](std::size_t rep) {
        const CensoredSample sample = generate_censored(
            spec.dist_x, spec.dist_y, spec.n, derive_seed(spec.master_seed, rep));
        const SortedCensoredSample sorted = sort_with_concomitants(sample);
        for (std::size_t ik = 0; ik < nk; ++ik) {
            const TopKView view = top_k_view(sorted, k_grid[ik]);
            const StepFunction hazard = ena(view);
            const EkmEstimate est = ekm_product(view);
            const double root_k = std::sqrt(static_cast<double>(k_grid[ik]));
            for (std::size_t is = 0; is < ns; ++is) {
                const double s = spec.s_list[is];
                const double hazard_ref = std::log(s) / params.gamma_x;
                const double cdf_ref = 1.0 - std::pow(s, -1.0 / params.gamma_x);
                raw[rep][(is * nk + ik) * 2] = root_k * (hazard.value(s) - hazard_ref);
                raw[rep][(is * nk + ik) * 2 + 1] = root_k * (est.f.value(s) - cdf_ref);
            }
        }
    });

    FiniteSampleCurves out;
    out.k_grid = k_grid;
    out.s_list = spec.s_list;
    out.reps = spec.reps;
    out.ena_mean.assign(ns, std::vector<double>(nk));
    out.ena_var.assign(ns, std::vector<double>(nk));
    out.ekm_mean.assign(ns, std::vector<double>(nk));
    out.ekm_var.assign(ns, std::vector<double>(nk));
    std::vector<double> column(spec.reps);
    for (std::size_t is = 0; is < ns; ++is) {
        for (std::size_t ik = 0; ik < nk; ++ik) {
            for (std::size_t rep = 0; rep < spec.reps; ++rep)
                column[rep] = raw[rep][(is * nk + ik) * 2];
            auto mv = detail::mean_var(column);
            out.ena_mean[is][ik] = mv.mean;
            out.ena_var[is][ik] = mv.variance;
            for (std::size_t rep = 0; rep < spec.reps; ++rep)
                column[rep] = raw[rep][(is * nk + ik) * 2 + 1];
            mv = detail::mean_var(column);
            out.ekm_mean[is][ik] = mv.mean;
            out.ekm_var[is][ik] = mv.variance;
        }
        out.ena_ref_var.push_back(ena_limit_variance(spec.s_list[is], params));
        out.ekm_ref_var.push_back(ekm_limit_variance(spec.s_list[is], params));
    }
    return out;
}

// One row of the selection-rule MSE table.
struct MseRow {
    std::size_t n = 0;
    SelectionRule rule = SelectionRule::RoT;
    double L = 0.0;  // meaningless for RoT
    double mse_x100 = 0.0;
    double mean_k = 0.0;
    std::size_t fallback_count = 0;
    std::size_t reps = 0;
};

struct MseTable {
    std::vector<MseRow> rows;
};

// Per replication: draw a sample, run every rule, score the censored Hill
// estimate at the selected k against the true gamma_x.
inline MseTable mse_study(const ExperimentSpec& spec, std::span<const SelectionConfig> rules) {
    detail::validate_spec(spec);
    if (rules.empty()) throw std::invalid_argument("mse_study: rules must be nonempty");
    const double gamma_x = spec.dist_x.gamma;
    const std::size_t nr = rules.size();

    struct RepOutcome {
        double sq_err;
        double k;
        bool fallback;
    };
    std::vector<std::vector<RepOutcome>> raw(spec.reps, std::vector<RepOutcome>(nr));
    parallel_for(spec.reps, spec.threads, [&](std::size_t rep) {
        const CensoredSample sample = generate_censored(
            spec.dist_x, spec.dist_y, spec.n, derive_seed(spec.master_seed, rep));
        const SortedCensoredSample sorted = sort_with_concomitants(sample);
        for (std::size_t r = 0; r < nr; ++r) {
            const SelectionResult sel = select_gof(sorted, rules[r]);
            const double err = sel.gamma_hat - gamma_x;
            raw[rep][r] = {err * err, static_cast<double>(sel.k_selected), sel.used_fallback};
        }
    });

    MseTable table;
    for (std::size_t r = 0; r < nr; ++r) {
        long double sum_sq = 0.0L, sum_k = 0.0L;
        std::size_t fallbacks = 0;
        for (std::size_t rep = 0; rep < spec.reps; ++rep) {
            sum_sq += raw[rep][r].sq_err;
            sum_k += raw[rep][r].k;
            fallbacks += raw[rep][r].fallback ? 1 : 0;
        }
        MseRow row;
        row.n = spec.n;
        row.rule = rules[r].rule;
        row.L = rules[r].L;
        row.mse_x100 = static_cast<double>(100.0L * sum_sq / static_cast<long double>(spec.reps));
        row.mean_k = static_cast<double>(sum_k / static_cast<long double>(spec.reps));
        row.fallback_count = fallbacks;
        row.reps = spec.reps;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace ektail
