// Extreme Nelson-Aalen and Kaplan-Meier estimators on threshold-relative
// excesses, product-limit integrals, and the censored Hill estimator.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ektail/step_function.hpp"
#include "ektail/tail_empirical.hpp"

namespace ektail {

namespace detail {

// Ranks sorted by ascending ratio. Rank i (from the top, 1 = largest) carries
// hazard increment delta_i / i.
struct HazardPoint {
    double ratio;
    double increment;
};

inline std::vector<HazardPoint> hazard_points(const TopKView& view) {
    std::vector<HazardPoint> pts;
    pts.reserve(view.k);
    // Walk ranks k..1, i.e. ratios in ascending order.
    for (std::size_t i = view.k; i >= 1; --i) {
        if (view.deltas[i - 1])
            pts.push_back({view.ratios[i - 1], 1.0 / static_cast<double>(i)});
    }
    // Ascending already, except for possible ties; keep a stable order.
    std::stable_sort(pts.begin(), pts.end(),
                     [](const HazardPoint& a, const HazardPoint& b) { return a.ratio < b.ratio; });
    return pts;
}

}  // namespace detail

// Cumulative-hazard estimator: a jump of delta_i/i at each uncensored ratio,
// i being the rank from the top. Equals -int_1^t dT1(s)/T(s-) for the
// uncentered tail empirical functions of the same view.
inline StepFunction ena(const TopKView& view) {
    const auto pts = detail::hazard_points(view);
    std::vector<double> xs, ys;
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    double cum = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        cum += pts[j].increment;
        if (!xs.empty() && pts[j].ratio == xs.back()) {
            ys.back() = cum;  // tied uncensored ratios merge into one jump
        } else {
            xs.push_back(pts[j].ratio);
            ys.push_back(cum);
        }
    }
    return StepFunction(0.0, std::move(xs), std::move(ys));
}

// Product-limit cdf on [1, inf) together with its defect (mass escaping to
// infinity when the largest observation is censored).
struct EkmEstimate {
    StepFunction f;
    double defect = 0.0;
    std::size_t k = 0;
    double threshold = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Shared survival sweep: multiply (1 - h_j) over hazard increments in
// ascending-ratio order. Extended precision keeps the telescoping products
// exact to well below the 1e-12 contracts.
inline EkmEstimate product_limit(const std::vector<HazardPoint>& pts, std::size_t k,
                                 double threshold) {
    std::vector<double> xs, ys;
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    long double survival = 1.0L;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (!(pts[j].increment <= 1.0))
            throw std::invalid_argument("product_limit: hazard jump exceeds 1");
        survival *= 1.0L - static_cast<long double>(pts[j].increment);
        const double value = static_cast<double>(1.0L - survival);
        if (!xs.empty() && pts[j].ratio == xs.back()) {
            ys.back() = value;
        } else {
            xs.push_back(pts[j].ratio);
            ys.push_back(value);
        }
    }
    EkmEstimate est{StepFunction(0.0, std::move(xs), std::move(ys)),
                    static_cast<double>(survival), k, threshold};
    return est;
}

}  // namespace detail

// Product form: F(x) = 1 - prod_i (1 - delta_i/i)^{I(ratio_i <= x)}.
// A censored rank contributes a unit factor, so jumps sit exactly at the
// uncensored ratios.
inline EkmEstimate ekm_product(const TopKView& view) {
    return detail::product_limit(detail::hazard_points(view), view.k, view.threshold);
}

// Discrete product integral of a cumulative hazard:
// survival(t) = prod_{s <= t} (1 - dLambda(s)).
inline EkmEstimate ekm_from_ena(const StepFunction& hazard, std::size_t k = 0,
                                double threshold = std::numeric_limits<double>::quiet_NaN()) {
    std::vector<detail::HazardPoint> pts;
    pts.reserve(hazard.jump_count());
    for (std::size_t j = 0; j < hazard.jump_count(); ++j) {
        const double h = hazard.jump_size(j);
        // Differences of cumulative sums may overshoot 1 by an ulp; clamp
        // those, reject genuinely invalid hazards.
        if (!(h <= 1.0 + 1e-9) || h < 0.0)
            throw std::invalid_argument("ekm_from_ena: hazard jumps must lie in [0,1]");
        pts.push_back({hazard.jump_location(j), std::min(h, 1.0)});
    }
    return detail::product_limit(pts, k, threshold);
}

// Integral of phi against the estimated cdf: sum of phi at the jump locations
// weighted by the jump masses. Defective mass carries no weight.
template <class Phi>
double ekm_integral(const EkmEstimate& est, Phi&& phi) {
    double acc = 0.0;
    for (std::size_t j = 0; j < est.f.jump_count(); ++j) {
        const double mass = est.f.jump_size(j);
        const double value = phi(est.f.jump_location(j));
        if (!std::isfinite(value))
            throw std::runtime_error("ekm_integral: phi is not finite at a jump location");
        acc += value * mass;
    }
    return acc;
}

// Censored Hill estimator of the tail index: int log d F_{k,n}.
inline double censored_hill(const TopKView& view) {
    return ekm_integral(ekm_product(view), [](double x) { return std::log(x); });
}

// Limit variance of sqrt(k)(gamma_n - gamma_x); requires tail uncensoring
// frequency p > 1/2.
inline double hill_asymptotic_variance(double gamma_x, double p) {
    if (!(gamma_x > 0.0))
        throw std::invalid_argument("hill_asymptotic_variance: gamma_x must be positive");
    if (!(p > 0.5) || !(p <= 1.0))
        throw std::invalid_argument("hill_asymptotic_variance: p must lie in (1/2, 1]");
    return gamma_x * gamma_x * p / (2.0 * p - 1.0);
}

}  // namespace ektail
