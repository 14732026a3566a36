#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "ektail/distributions.hpp"
#include "ektail/selection.hpp"

using namespace ektail;
using Catch::Approx;

namespace {

CensoredSample pareto_sample(std::size_t n, std::uint64_t seed, double gx = 0.5,
                             double gy = 1.5) {
    return generate_censored(DistributionSpec::pareto(gx), DistributionSpec::pareto(gy), n,
                             seed);
}

}  // namespace

TEST_CASE("rule of thumb", "[selection]") {
    REQUIRE(select_rot(1000) == 200);
    REQUIRE(select_rot(109992) == 21998);
    REQUIRE(select_rot(13) == 2);
    REQUIRE_THROWS_AS(select_rot(9), std::invalid_argument);
}

TEST_CASE("thresholded selection basics", "[selection]") {
    const auto sample = pareto_sample(1000, 3);

    SECTION("L = 0 is unattainable, so the fallback fires") {
        SelectionConfig cfg;
        cfg.rule = SelectionRule::KS;
        cfg.L = 0.0;
        const auto res = select_gof(sample, cfg);
        REQUIRE(res.used_fallback);
        REQUIRE(res.k_selected == 200);
        REQUIRE(res.trace.size() == 481);  // every candidate in [20, 500] was scanned
    }
    SECTION("L = inf accepts k_max immediately") {
        SelectionConfig cfg;
        cfg.rule = SelectionRule::CvM;
        cfg.L = std::numeric_limits<double>::infinity();
        const auto res = select_gof(sample, cfg);
        REQUIRE_FALSE(res.used_fallback);
        REQUIRE(res.k_selected == 500);
        REQUIRE(res.trace.size() == 1);
    }
    SECTION("rule-of-thumb config short-circuits") {
        SelectionConfig cfg;
        cfg.rule = SelectionRule::RoT;
        const auto res = select_gof(sample, cfg);
        REQUIRE(res.k_selected == 200);
        REQUIRE_FALSE(res.used_fallback);
        REQUIRE(res.gamma_hat > 0.0);
    }
    SECTION("invalid k range") {
        SelectionConfig cfg;
        cfg.k_min = 1;
        REQUIRE_THROWS_AS(select_gof(sample, cfg), std::invalid_argument);
        cfg.k_min = 600;
        REQUIRE_THROWS_AS(select_gof(sample, cfg), std::invalid_argument);
        cfg.k_min = 20;
        cfg.k_max = 1000;
        REQUIRE_THROWS_AS(select_gof(sample, cfg), std::invalid_argument);
        cfg.k_max = 0;
        cfg.k_step = 0;
        REQUIRE_THROWS_AS(select_gof(sample, cfg), std::invalid_argument);
    }
}

TEST_CASE("selected k maximizes over the scanned grid", "[selection]") {
    // brute force over the full grid must agree with the descending scan
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto sorted = sort_with_concomitants(pareto_sample(600, derive_seed(50, seed)));
        SelectionConfig cfg;
        cfg.rule = SelectionRule::KS;
        cfg.L = 0.9;  // tight enough that the scan usually walks inward
        cfg.k_step = 7;
        const auto res = select_gof(sorted, cfg);

        std::vector<std::size_t> grid;  // 300, 293, ..., 20
        for (std::size_t k = 300; k >= 20; k -= 7) grid.push_back(k);
        std::size_t best = 0;
        for (std::size_t k : grid)
            if (gof_at_k(sorted, k).ks < cfg.L) {
                best = std::max(best, k);
                break;  // grid is descending, the first hit is the largest
            }
        if (best > 0) {
            REQUIRE_FALSE(res.used_fallback);
            REQUIRE(res.k_selected == best);
        } else {
            REQUIRE(res.used_fallback);
            REQUIRE(res.k_selected == 120);
        }
    }
}

TEST_CASE("trace invariant: everything above the selected k fails the bound", "[selection]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto sample = pareto_sample(800, derive_seed(60, seed));
        SelectionConfig cfg;
        cfg.rule = SelectionRule::CvM;
        cfg.L = 0.12;
        const auto res = select_gof(sample, cfg);
        for (const auto& tp : res.trace) {
            if (tp.k > res.k_selected) REQUIRE(tp.statistic >= cfg.L);
            if (!res.used_fallback && tp.k == res.k_selected) REQUIRE(tp.statistic < cfg.L);
        }
    }
}

TEST_CASE("full trace agrees with the early-exit scan", "[selection]") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto sorted =
            sort_with_concomitants(pareto_sample(700, derive_seed(70, seed)));
        SelectionConfig scan;
        scan.rule = SelectionRule::KS;
        scan.L = 1.0;
        SelectionConfig full = scan;
        full.full_trace = true;
        full.threads = 3;
        const auto a = select_gof(sorted, scan);
        const auto b = select_gof(sorted, full);
        REQUIRE(a.k_selected == b.k_selected);
        REQUIRE(a.used_fallback == b.used_fallback);
        REQUIRE(a.gamma_hat == b.gamma_hat);
        REQUIRE(b.trace.size() == 331);  // the whole grid [20, 350]
        // the scanned prefix matches the full trace point for point
        const std::size_t offset = b.trace.size() - a.trace.size();
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            REQUIRE(a.trace[i].k == b.trace[offset + i].k);
            REQUIRE(a.trace[i].statistic == b.trace[offset + i].statistic);
        }
    }
}

TEST_CASE("selection is deterministic and scale invariant", "[selection]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto sample = pareto_sample(500, derive_seed(80, seed));
        SelectionConfig cfg;
        cfg.rule = SelectionRule::KS;
        cfg.L = 1.5;
        const auto a = select_gof(sample, cfg);
        const auto b = select_gof(sample, cfg);
        REQUIRE(a.k_selected == b.k_selected);
        REQUIRE(a.gamma_hat == b.gamma_hat);

        for (double& z : sample.z) z *= 3.0;
        const auto c = select_gof(sample, cfg);
        REQUIRE(c.k_selected == a.k_selected);
        REQUIRE(c.used_fallback == a.used_fallback);
        REQUIRE(c.gamma_hat == Approx(a.gamma_hat).margin(1e-12));
    }
}

TEST_CASE("well-specified data lets the KS rule pick k beyond the fixed fraction",
          "[selection][mc]") {
    // Uncensored exact Pareto: the fit is right at any k, so the largest-k
    // rule clears the bound well above 0.2 n most of the time.
    int beyond = 0;
    const auto px = DistributionSpec::pareto(0.5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CensoredSample sample;
        UniformStream u(derive_seed(90, seed));
        sample.z.resize(10000);
        sample.delta.assign(10000, 1);
        for (auto& z : sample.z) z = quantile(px, u.next());
        SelectionConfig cfg;
        cfg.rule = SelectionRule::KS;
        cfg.L = 1.5;
        const auto res = select_gof(sample, cfg);
        if (res.k_selected > 2000) ++beyond;
    }
    REQUIRE(beyond >= 80);
}
