// Helpers shared across test files.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ektail/distributions.hpp"
#include "ektail/rng.hpp"
#include "ektail/tail_empirical.hpp"

namespace ektail::testing {

// A random top-k view: Pareto-ish ratios above 1 in descending order with
// Bernoulli censoring flags.
inline TopKView random_view(std::uint64_t seed, std::size_t k_max = 200,
                            double uncensored_prob = 0.6) {
    UniformStream u(seed);
    TopKView view;
    view.k = 1 + static_cast<std::size_t>(u.next() * static_cast<double>(k_max));
    view.threshold = 1.0 + 9.0 * u.next();
    view.ratios.resize(view.k);
    view.deltas.resize(view.k);
    for (std::size_t i = 0; i < view.k; ++i) {
        view.ratios[i] = std::pow(1.0 - u.next(), -0.5);  // Pareto(1/2) on (1, inf)
        view.deltas[i] = u.next() < uncensored_prob ? 1 : 0;
    }
    std::sort(view.ratios.begin(), view.ratios.end(), std::greater<double>());
    return view;
}

}  // namespace ektail::testing
