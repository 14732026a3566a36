// The limit Gaussian martingale Z on (0,1] with Cov(Z(s),Z(t)) =
// p(1/s ^ 1/t - 1): closed-form moments, two independent samplers, and the
// derived limit laws of the extreme goodness-of-fit statistics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ektail/distributions.hpp"
#include "ektail/parallel.hpp"
#include "ektail/rng.hpp"

namespace ektail {

inline double z_covariance(double s, double t, double p) {
    if (!(s > 0.0 && s <= 1.0) || !(t > 0.0 && t <= 1.0))
        throw std::invalid_argument("z_covariance: arguments must lie in (0,1]");
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("z_covariance: p must lie in (0,1]");
    return p * (std::min(1.0 / s, 1.0 / t) - 1.0);
}

// Variance of the hazard-scale limit at s >= 1: Var Z(T(s)) = p(s^{1/gamma}-1).
inline double ena_limit_variance(double s, const TailParams& params) {
    if (!(s >= 1.0)) throw std::invalid_argument("ena_limit_variance: s must be >= 1");
    return params.p * (std::pow(s, 1.0 / params.gamma) - 1.0);
}

// Distribution-scale analogue, damped by (1 - F(s))^2 = s^{-2/gamma_x}.
inline double ekm_limit_variance(double s, const TailParams& params) {
    return std::pow(s, -2.0 / params.gamma_x) * ena_limit_variance(s, params);
}

// One simulated trajectory of Z on a grid in (0,1].
struct LimitPath {
    std::vector<double> grid;
    std::vector<double> values;
};

// Logarithmically spaced grid on [lo, 1]; the integrand variance in the
// pathwise construction grows like u^-3 near 0, so points concentrate there.
inline std::vector<double> log_grid(double lo = 1e-4, std::size_t points = 2000) {
    if (!(lo > 0.0 && lo < 1.0)) throw std::invalid_argument("log_grid: lo must lie in (0,1)");
    if (points < 2) throw std::invalid_argument("log_grid: need at least two points");
    std::vector<double> g(points);
    const double step = -std::log(lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
    g.back() = 1.0;
    return g;
}

namespace detail {

inline void check_grid_sorted(std::span<const double> grid, double hi_max) {
    if (grid.empty()) throw std::invalid_argument("limit grid must be nonempty");
    double prev = 0.0;
    for (double t : grid) {
        if (!(t > prev)) throw std::invalid_argument("limit grid must be strictly increasing and positive");
        if (!(t <= hi_max)) throw std::invalid_argument("limit grid point outside domain");
        prev = t;
    }
}

}  // namespace detail

// Pathwise construction from two independent Brownian motions W, Wp:
//   Z(t) = (p B(t) + sqrt(p(1-p)) Bp(t)) / t - sqrt(p(1-p)) int_t^1 Wp(u)/u^2 du
// with bridges B(t) = W(t) - t W(1). The integral uses trapezoidal quadrature
// on the grid (extended to include 1), so the grid controls the accuracy.
inline LimitPath simulate_z_construction(double p, std::span<const double> grid,
                                         std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("simulate_z_construction: p must lie in (0,1]");
    detail::check_grid_sorted(grid, 1.0);

    std::vector<double> t(grid.begin(), grid.end());
    if (t.back() < 1.0) t.push_back(1.0);
    const std::size_t m = t.size();

    NormalStream normals(seed);
    std::vector<double> w(m), wp(m);
    double prev_t = 0.0, acc_w = 0.0, acc_wp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double sd = std::sqrt(t[i] - prev_t);
        acc_w += sd * normals.at(2 * i);
        acc_wp += sd * normals.at(2 * i + 1);
        w[i] = acc_w;
        wp[i] = acc_wp;
        prev_t = t[i];
    }
    const double w1 = w[m - 1], wp1 = wp[m - 1];

    // Right-cumulative trapezoid of Wp(u)/u^2 from t[i] to 1.
    std::vector<double> integral(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;) {
        const double fa = wp[i] / (t[i] * t[i]);
        const double fb = wp[i + 1] / (t[i + 1] * t[i + 1]);
        integral[i] = integral[i + 1] + 0.5 * (fa + fb) * (t[i + 1] - t[i]);
    }

    const double cross = std::sqrt(p * (1.0 - p));
    LimitPath path;
    path.grid.assign(grid.begin(), grid.end());
    path.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double b = w[i] - t[i] * w1;
        const double bp = wp[i] - t[i] * wp1;
        path.values[i] = (p * b + cross * bp) / t[i] - cross * integral[i];
    }
    return path;
}

namespace detail {

// Dense lower-triangular Cholesky; throws when the matrix is not positive
// definite (duplicate grid points, or a point at t = 1 where Var Z = 0).
inline std::vector<double> cholesky_lower(std::vector<double> a, std::size_t m) {
    for (std::size_t j = 0; j < m; ++j) {
        double d = a[j * m + j];
        for (std::size_t r = 0; r < j; ++r) d -= a[j * m + r] * a[j * m + r];
        if (!(d > 0.0)) throw std::runtime_error("cholesky: covariance matrix not positive definite");
        const double root = std::sqrt(d);
        a[j * m + j] = root;
        for (std::size_t i = j + 1; i < m; ++i) {
            double s = a[i * m + j];
            for (std::size_t r = 0; r < j; ++r) s -= a[i * m + r] * a[j * m + r];
            a[i * m + j] = s / root;
        }
        for (std::size_t r = j + 1; r < m; ++r) a[j * m + r] = 0.0;
    }
    return a;
}

}  // namespace detail

// Exact finite-dimensional draw of Z on a grid strictly inside (0,1), via
// Cholesky factorization of the closed-form covariance.
inline LimitPath simulate_z_cholesky(double p, std::span<const double> grid,
                                     std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("simulate_z_cholesky: p must lie in (0,1]");
    detail::check_grid_sorted(grid, 1.0 - 1e-15);
    const std::size_t m = grid.size();
    std::vector<double> cov(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) cov[i * m + j] = z_covariance(grid[i], grid[j], p);
    const std::vector<double> lower = detail::cholesky_lower(std::move(cov), m);

    NormalStream normals(seed);
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = normals.at(i);

    LimitPath path;
    path.grid.assign(grid.begin(), grid.end());
    path.values.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += lower[i * m + j] * g[j];
        path.values[i] = s;
    }
    return path;
}

// Samples of the limit laws of the extreme goodness-of-fit statistics:
//   KS limit  = sup_t t^p |Z(t)|
//   CvM limit = int_0^1 (1-u)^2 Z((1-u)^{1/p})^2 du
// evaluated on the simulation grid (the sup undershoots the continuum value;
// refine the grid to tighten it). Paths are simulated independently with
// per-path seeds derived from `seed`, so results do not depend on `threads`.
struct GofLimitSample {
    std::vector<double> ks;
    std::vector<double> cvm;
};

inline GofLimitSample gof_limit_sample(double p, std::span<const double> grid,
                                       std::size_t n_paths, std::uint64_t seed,
                                       unsigned threads = 0) {
    if (n_paths == 0) throw std::invalid_argument("gof_limit_sample: n_paths must be >= 1");
    GofLimitSample out;
    out.ks.resize(n_paths);
    out.cvm.resize(n_paths);
    parallel_for(n_paths, threads, [&](std::size_t path_index) {
        const LimitPath path =
            simulate_z_construction(p, grid, derive_seed(seed, path_index));
        const std::size_t m = path.grid.size();
        double sup = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            sup = std::max(sup, std::pow(path.grid[i], p) * std::abs(path.values[i]));
        out.ks[path_index] = sup;

        // Trapezoid in u = 1 - t^p, descending from u(t_min) to u(1) = 0; the
        // stub [u(t_min), 1] is closed with a zero node since the integrand
        // vanishes at u = 1 for p > 1/2.
        long double acc = 0.0L;
        auto f = [&](std::size_t i) {
            const double one_minus_u = std::pow(path.grid[i], p);
            return one_minus_u * one_minus_u * path.values[i] * path.values[i];
        };
        double u_prev = 1.0 - std::pow(path.grid[0], p);
        double f_prev = f(0);
        acc += 0.5L * static_cast<long double>(f_prev) * (1.0 - u_prev);
        for (std::size_t i = 1; i < m; ++i) {
            const double u = 1.0 - std::pow(path.grid[i], p);
            const double fi = f(i);
            acc += 0.5L * (static_cast<long double>(f_prev) + fi) * (u_prev - u);
            u_prev = u;
            f_prev = fi;
        }
        out.cvm[path_index] = static_cast<double>(acc);
    });
    return out;
}

// Empirical quantile with linear interpolation between order statistics.
inline double sample_quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
    if (!(prob >= 0.0 && prob <= 1.0))
        throw std::invalid_argument("sample_quantile: prob must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = prob * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double w = h - static_cast<double>(lo);
    return values[lo] * (1.0 - w) + values[lo + 1] * w;
}

}  // namespace ektail
