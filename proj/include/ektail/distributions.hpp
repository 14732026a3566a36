// Heavy-tailed families (exact Pareto, Frechet, Burr) and the censored-pair
// generator Z = min(X, Y), delta = I(X <= Y).
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ektail/rng.hpp"

namespace ektail {

enum class Family { ExactPareto, Frechet, Burr };

inline const char* family_name(Family f) noexcept {
    switch (f) {
        case Family::ExactPareto: return "pareto";
        case Family::Frechet: return "frechet";
        case Family::Burr: return "burr";
    }
    return "?";
}

// A distribution in the Frechet domain with tail index gamma:
//   exact Pareto: F(x) = 1 - x^{-1/gamma},            x >= 1
//   Frechet:      F(x) = exp(-x^{-1/gamma}),          x > 0   (unit scale)
//   Burr:         F(x) = 1 - (1 + x^tau)^{-alpha},    x > 0,  gamma = 1/(alpha*tau)
struct DistributionSpec {
    Family family = Family::ExactPareto;
    double gamma = 1.0;
    double alpha = 1.0;  // Burr only
    double tau = 1.0;    // Burr only

    static DistributionSpec pareto(double gamma) {
        require_positive(gamma, "gamma");
        return {Family::ExactPareto, gamma, 1.0, 1.0};
    }

    static DistributionSpec frechet(double gamma) {
        require_positive(gamma, "gamma");
        return {Family::Frechet, gamma, 1.0, 1.0};
    }

    static DistributionSpec burr(double alpha, double tau) {
        require_positive(alpha, "alpha");
        require_positive(tau, "tau");
        return {Family::Burr, 1.0 / (alpha * tau), alpha, tau};
    }

    // Burr spec with a given tail index; alpha defaults to 1.
    static DistributionSpec burr_with_gamma(double gamma, double alpha = 1.0) {
        require_positive(gamma, "gamma");
        require_positive(alpha, "alpha");
        return {Family::Burr, gamma, alpha, 1.0 / (alpha * gamma)};
    }

  private:
    static void require_positive(double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("DistributionSpec: ") + name + " must be positive");
    }
};

inline double quantile(const DistributionSpec& spec, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("quantile: u must lie in (0,1)");
    switch (spec.family) {
        case Family::ExactPareto: return std::pow(1.0 - u, -spec.gamma);
        case Family::Frechet: return std::pow(-std::log(u), -spec.gamma);
        case Family::Burr:
            return std::pow(std::pow(1.0 - u, -1.0 / spec.alpha) - 1.0, 1.0 / spec.tau);
    }
    throw std::logic_error("quantile: unknown family");
}

inline double cdf(const DistributionSpec& spec, double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("cdf: x must be positive");
    switch (spec.family) {
        case Family::ExactPareto:
            return x < 1.0 ? 0.0 : 1.0 - std::pow(x, -1.0 / spec.gamma);
        case Family::Frechet: return std::exp(-std::pow(x, -1.0 / spec.gamma));
        case Family::Burr:
            return 1.0 - std::pow(1.0 + std::pow(x, spec.tau), -spec.alpha);
    }
    throw std::logic_error("cdf: unknown family");
}

// Observed minima with uncensoring flags (1 means X <= Y).
struct CensoredSample {
    std::vector<double> z;
    std::vector<std::uint8_t> delta;

    std::size_t size() const noexcept { return z.size(); }
};

inline CensoredSample generate_censored(const DistributionSpec& spec_x,
                                        const DistributionSpec& spec_y,
                                        std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_censored: n must be >= 1");
    UniformStream uniforms(seed);
    CensoredSample out;
    out.z.resize(n);
    out.delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = quantile(spec_x, uniforms.at(2 * i));
        const double y = quantile(spec_y, uniforms.at(2 * i + 1));
        out.z[i] = std::min(x, y);
        out.delta[i] = x <= y ? 1 : 0;
    }
    return out;
}

// Tail quantities of Z = min(X, Y) for independent Frechet-domain X, Y:
// gamma is the tail index of Z and p the limiting uncensored fraction in the tail.
struct TailParams {
    double gamma_x;
    double gamma_y;
    double gamma;  // gamma_x*gamma_y/(gamma_x+gamma_y)
    double p;      // gamma_y/(gamma_x+gamma_y) == gamma/gamma_x
};

inline TailParams tail_params(double gamma_x, double gamma_y) {
    if (!(gamma_x > 0.0) || !(gamma_y > 0.0))
        throw std::invalid_argument("tail_params: tail indices must be positive");
    TailParams tp{};
    tp.gamma_x = gamma_x;
    tp.gamma_y = gamma_y;
    tp.gamma = gamma_x * gamma_y / (gamma_x + gamma_y);
    tp.p = gamma_y / (gamma_x + gamma_y);
    return tp;
}

}  // namespace ektail
