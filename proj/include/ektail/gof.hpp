// Extreme Kolmogorov-Smirnov and Cramer-von Mises statistics against the
// plug-in Pareto tail fit, evaluated in closed form.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ektail/estimators.hpp"
#include "ektail/tail_empirical.hpp"

namespace ektail {

// Fitted Pareto tail cdf on [1, inf): s -> 1 - s^{-1/gamma_hat}.
inline double fitted_pareto_cdf(double gamma_hat, double s) {
    if (!(gamma_hat > 0.0))
        throw std::invalid_argument("fitted_pareto_cdf: gamma_hat must be positive");
    if (!(s >= 1.0)) throw std::invalid_argument("fitted_pareto_cdf: s must be >= 1");
    return 1.0 - std::pow(s, -1.0 / gamma_hat);
}

// sqrt(k) times the exact supremum of |F_{k,n} - G| over [1, inf). Both
// one-sided values enter at every jump; the limit s -> inf contributes
// |terminal - 1|, nonzero for defective estimates.
inline double ks_statistic(const EkmEstimate& est, double gamma_hat) {
    if (est.k == 0) throw std::invalid_argument("ks_statistic: estimate carries no k");
    double sup = std::abs(est.f.terminal_value() - 1.0);
    sup = std::max(sup, std::abs(est.f.initial_value()));  // s = 1, where G = 0
    for (std::size_t j = 0; j < est.f.jump_count(); ++j) {
        const double g = fitted_pareto_cdf(gamma_hat, est.f.jump_location(j));
        sup = std::max(sup, std::abs(est.f.value_before(j) - g));
        sup = std::max(sup, std::abs(est.f.value_after(j) - g));
    }
    return std::sqrt(static_cast<double>(est.k)) * sup;
}

// k times the integral of (F_{k,n} - G)^2 dG, exact under the substitution
// u = G(s): on each u-interval with constant step value c the integrand is
// (c - u)^2, integrating to ((c-a)^3 - (c-b)^3)/3.
inline double cvm_statistic(const EkmEstimate& est, double gamma_hat) {
    if (est.k == 0) throw std::invalid_argument("cvm_statistic: estimate carries no k");
    long double acc = 0.0L;
    double u_prev = 0.0;
    double c = est.f.initial_value();
    const auto cube = [](long double v) { return v * v * v; };
    for (std::size_t j = 0; j < est.f.jump_count(); ++j) {
        const double u = fitted_pareto_cdf(gamma_hat, est.f.jump_location(j));
        acc += cube(static_cast<long double>(c) - u_prev) - cube(static_cast<long double>(c) - u);
        c = est.f.value_after(j);
        u_prev = u;
    }
    acc += cube(static_cast<long double>(c) - u_prev) - cube(static_cast<long double>(c) - 1.0L);
    return static_cast<double>(est.k) * static_cast<double>(acc / 3.0L);
}

struct GofResult {
    std::size_t k = 0;
    double gamma_hat = 0.0;
    double ks = 0.0;
    double cvm = 0.0;
};

// Plug-in fit and both statistics at one k. A degenerate fit (gamma_hat <= 0,
// i.e. no uncensored top observations) yields infinite statistics.
inline GofResult gof_at_k(const SortedCensoredSample& sorted, std::size_t k) {
    const TopKView view = top_k_view(sorted, k);
    const EkmEstimate est = ekm_product(view);
    GofResult r;
    r.k = k;
    r.gamma_hat = ekm_integral(est, [](double x) { return std::log(x); });
    if (r.gamma_hat > 0.0) {
        r.ks = ks_statistic(est, r.gamma_hat);
        r.cvm = cvm_statistic(est, r.gamma_hat);
    } else {
        r.ks = std::numeric_limits<double>::infinity();
        r.cvm = std::numeric_limits<double>::infinity();
    }
    return r;
}

// Statistic-vs-k trace over a grid, gamma_hat recomputed at every k.
inline std::vector<GofResult> gof_curve(const SortedCensoredSample& sorted,
                                        std::span<const std::size_t> k_grid) {
    const std::size_t n = sorted.size();
    std::vector<GofResult> out;
    out.reserve(k_grid.size());
    for (std::size_t k : k_grid) {
        if (k < 2 || k + 1 > n)
            throw std::invalid_argument("gof_curve: k values must lie in [2, n-1]");
        out.push_back(gof_at_k(sorted, k));
    }
    return out;
}

inline std::vector<GofResult> gof_curve(const CensoredSample& sample,
                                        std::span<const std::size_t> k_grid) {
    return gof_curve(sort_with_concomitants(sample), k_grid);
}

}  // namespace ektail
