#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ektail/montecarlo.hpp"

using namespace ektail;
using Catch::Approx;

TEST_CASE("geometric k grid", "[montecarlo]") {
    const auto g = geometric_k_grid(50, 5000, 30);
    REQUIRE(g.front() == 50);
    REQUIRE(g.back() == 5000);
    REQUIRE(g.size() <= 30);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);
    REQUIRE_THROWS_AS(geometric_k_grid(0, 10, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(geometric_k_grid(10, 5, 5), std::invalid_argument);
}

TEST_CASE("finite sample study shapes and degenerate cases", "[montecarlo]") {
    ExperimentSpec spec;
    spec.n = 400;
    spec.reps = 3;
    spec.k_grid = {20, 50};
    spec.s_list = {2.0};
    spec.threads = 1;
    const auto curves = finite_sample_study(spec);
    REQUIRE(curves.k_grid == spec.k_grid);
    REQUIRE(curves.ena_mean.size() == 1);
    REQUIRE(curves.ena_mean[0].size() == 2);
    REQUIRE(curves.ena_ref_var[0] == Approx(0.75 * (std::pow(2.0, 8.0 / 3.0) - 1.0)));
    REQUIRE(std::isfinite(curves.ekm_var[0][0]));

    SECTION("a single replication reports no variance") {
        spec.reps = 1;
        const auto single = finite_sample_study(spec);
        REQUIRE(std::isnan(single.ena_var[0][0]));
        REQUIRE(std::isnan(single.ekm_var[0][1]));
        REQUIRE(std::isfinite(single.ena_mean[0][0]));
    }
    SECTION("validation") {
        spec.reps = 0;
        REQUIRE_THROWS_AS(finite_sample_study(spec), std::invalid_argument);
        spec.reps = 2;
        spec.n = 50;
        REQUIRE_THROWS_AS(finite_sample_study(spec), std::invalid_argument);
        spec.n = 400;
        spec.s_list = {0.5};
        REQUIRE_THROWS_AS(finite_sample_study(spec), std::invalid_argument);
        spec.s_list = {2.0};
        spec.k_grid = {400};
        REQUIRE_THROWS_AS(finite_sample_study(spec), std::invalid_argument);
    }
}

TEST_CASE("results are bit-identical for any worker count", "[montecarlo]") {
    ExperimentSpec spec;
    spec.n = 500;
    spec.reps = 12;
    spec.k_grid = {25, 60};
    spec.master_seed = 99;

    spec.threads = 1;
    const auto c1 = finite_sample_study(spec);
    spec.threads = 4;
    const auto c4 = finite_sample_study(spec);
    REQUIRE(c1.ena_mean == c4.ena_mean);
    REQUIRE(c1.ekm_var == c4.ekm_var);

    std::vector<SelectionConfig> rules(2);
    rules[0].rule = SelectionRule::RoT;
    rules[1].rule = SelectionRule::KS;
    rules[1].L = 1.5;
    spec.threads = 1;
    const auto t1 = mse_study(spec, rules);
    spec.threads = 4;
    const auto t4 = mse_study(spec, rules);
    REQUIRE(t1.rows.size() == t4.rows.size());
    for (std::size_t i = 0; i < t1.rows.size(); ++i) {
        REQUIRE(t1.rows[i].mse_x100 == t4.rows[i].mse_x100);
        REQUIRE(t1.rows[i].mean_k == t4.rows[i].mean_k);
        REQUIRE(t1.rows[i].fallback_count == t4.rows[i].fallback_count);
    }
}

TEST_CASE("mse study row bookkeeping", "[montecarlo]") {
    ExperimentSpec spec;
    spec.n = 400;
    spec.reps = 5;
    std::vector<SelectionConfig> rules(1);
    rules[0].rule = SelectionRule::RoT;
    const auto table = mse_study(spec, rules);
    REQUIRE(table.rows.size() == 1);
    REQUIRE(table.rows[0].n == 400);
    REQUIRE(table.rows[0].reps == 5);
    REQUIRE(table.rows[0].mse_x100 >= 0.0);
    REQUIRE(table.rows[0].mean_k == 80.0);  // rot always picks floor(0.2 n)
    REQUIRE_THROWS_AS(mse_study(spec, {}), std::invalid_argument);
}

TEST_CASE("finite-sample moments approach the closed-form limits", "[montecarlo][mc]") {
    // Exact Pareto pair: centered, scaled EKM at s=2 has mean near 0 and
    // variance near the damped limit; k/n small keeps the threshold deep.
    ExperimentSpec spec;
    spec.dist_x = DistributionSpec::pareto(0.5);
    spec.dist_y = DistributionSpec::pareto(1.5);
    spec.n = 2000;
    spec.reps = 300;
    spec.k_grid = {100};
    spec.s_list = {2.0};
    spec.master_seed = 7;
    const auto curves = finite_sample_study(spec);
    REQUIRE(std::abs(curves.ekm_mean[0][0]) < 0.4);
    REQUIRE(curves.ekm_var[0][0] == Approx(curves.ekm_ref_var[0]).epsilon(0.35));
    REQUIRE(std::abs(curves.ena_mean[0][0]) < 1.5);
    REQUIRE(curves.ena_var[0][0] == Approx(curves.ena_ref_var[0]).epsilon(0.35));
}

TEST_CASE("Frechet large-n golden value for the CvM rule", "[montecarlo][slow]") {
    // 100 x MSE approximately 0.1 at n = 50000, gamma_y = 1.5, L = 0.25;
    // golden windows allow +-50% for entries below 1.
    ExperimentSpec spec;
    spec.dist_x = DistributionSpec::frechet(0.5);
    spec.dist_y = DistributionSpec::frechet(1.5);
    spec.n = 50000;
    spec.reps = 500;
    spec.master_seed = 60606;
    std::vector<SelectionConfig> rules(1);
    rules[0].rule = SelectionRule::CvM;
    rules[0].L = 0.25;
    rules[0].k_step = 50;
    const auto table = mse_study(spec, rules);
    INFO("100xMSE = " << table.rows[0].mse_x100);
    REQUIRE(table.rows[0].mse_x100 >= 0.05);
    REQUIRE(table.rows[0].mse_x100 <= 0.15);
}

TEST_CASE("adaptive rules beat the fixed fraction at large n on Burr data",
          "[montecarlo][slow]") {
    ExperimentSpec spec;
    spec.dist_x = DistributionSpec::burr(1.0, 2.0);        // gamma_x = 0.5
    spec.dist_y = DistributionSpec::burr(1.0, 2.0 / 3.0);  // gamma_y = 1.5
    spec.n = 50000;
    spec.reps = 500;
    spec.master_seed = 11;
    std::vector<SelectionConfig> rules(3);
    rules[0].rule = SelectionRule::RoT;
    rules[1].rule = SelectionRule::KS;
    rules[1].L = 1.5;
    rules[1].k_step = 50;
    rules[2].rule = SelectionRule::CvM;
    rules[2].L = 0.25;
    rules[2].k_step = 50;
    const auto table = mse_study(spec, rules);
    INFO("S1=" << table.rows[0].mse_x100 << " S2=" << table.rows[1].mse_x100
                << " S3=" << table.rows[2].mse_x100);
    REQUIRE(table.rows[1].mse_x100 < table.rows[0].mse_x100);
    REQUIRE(table.rows[2].mse_x100 < table.rows[0].mse_x100);
}
