// Command-line interface for tail inference on right-censored heavy-tailed
// data: estimation, goodness-of-fit traces, sample-fraction selection,
// limit-law simulation, Monte Carlo studies, and windowed analyses.
//
// Exit codes: 0 success, 64 usage, 65 data or numerical error, 74 I/O error.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ektail/ektail.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitIo = 74;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    fn(out);
}

std::vector<ektail::ClaimRecord> load_records(const std::string& path,
                                              const ektail::CsvColumns& columns) {
    if (!std::filesystem::exists(path)) throw IoError(path + ": no such file");
    return ektail::ingest_csv(path, columns);
}

ektail::SelectionRule parse_rule_name(const std::string& name) {
    if (name == "rot") return ektail::SelectionRule::RoT;
    if (name == "ks") return ektail::SelectionRule::KS;
    if (name == "cvm") return ektail::SelectionRule::CvM;
    throw UsageError("unknown rule '" + name + "' (expected rot, ks or cvm)");
}

// "rot", "ks:1.75" or "cvm:0.5"
ektail::SelectionConfig parse_rule_spec(const std::string& spec) {
    ektail::SelectionConfig cfg;
    const auto colon = spec.find(':');
    cfg.rule = parse_rule_name(spec.substr(0, colon));
    if (cfg.rule == ektail::SelectionRule::RoT) {
        if (colon != std::string::npos) throw UsageError("rule rot takes no threshold");
        return cfg;
    }
    if (colon == std::string::npos)
        throw UsageError("rule '" + spec + "' needs a threshold, e.g. ks:1.75");
    try {
        cfg.L = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw UsageError("cannot parse threshold in rule '" + spec + "'");
    }
    return cfg;
}

json step_function_json(const ektail::StepFunction& f) {
    json j;
    j["initial"] = f.initial_value();
    j["x"] = f.xs();
    j["y"] = f.ys();
    return j;
}

json load_config(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError(path + ": no such file");
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

ektail::DistributionSpec parse_dist(const json& j, const std::string& which) {
    if (!j.is_object() || !j.contains("family"))
        throw std::runtime_error(which + ": expected an object with a 'family' field");
    const std::string family = j.at("family");
    if (family == "pareto") return ektail::DistributionSpec::pareto(j.at("gamma"));
    if (family == "frechet") return ektail::DistributionSpec::frechet(j.at("gamma"));
    if (family == "burr") {
        if (j.contains("tau"))
            return ektail::DistributionSpec::burr(j.value("alpha", 1.0), j.at("tau"));
        return ektail::DistributionSpec::burr_with_gamma(j.at("gamma"), j.value("alpha", 1.0));
    }
    throw std::runtime_error(which + ": unknown family '" + family + "'");
}

ektail::SelectionConfig parse_rule_json(const json& j) {
    ektail::SelectionConfig cfg;
    cfg.rule = parse_rule_name(j.at("rule"));
    if (cfg.rule != ektail::SelectionRule::RoT) cfg.L = j.at("L");
    cfg.k_min = j.value("k_min", cfg.k_min);
    cfg.k_max = j.value("k_max", cfg.k_max);
    cfg.k_step = j.value("k_step", cfg.k_step);
    cfg.fallback_fraction = j.value("fallback_fraction", cfg.fallback_fraction);
    return cfg;
}

std::vector<std::size_t> parse_n_list(const json& j) {
    std::vector<std::size_t> ns;
    if (j.is_array())
        for (const auto& v : j) ns.push_back(v.get<std::size_t>());
    else
        ns.push_back(j.get<std::size_t>());
    return ns;
}

// ---------------------------------------------------------------------------

struct EstimateOptions {
    std::string input, output, format = "json";
    ektail::CsvColumns columns;
    std::size_t k = 0;
    bool with_ena = false;
};

void run_estimate(const EstimateOptions& opt) {
    const auto sample = ektail::to_sample(load_records(opt.input, opt.columns));
    const auto sorted = ektail::sort_with_concomitants(sample);
    const auto view = ektail::top_k_view(sorted, opt.k);
    const auto est = ektail::ekm_product(view);
    const double gamma_hat = ektail::censored_hill(view);

    if (opt.format == "json") {
        json j;
        j["schema_version"] = 1;
        j["n"] = sample.size();
        j["k"] = opt.k;
        j["threshold"] = est.threshold;
        j["gamma_hat"] = gamma_hat;
        j["defect"] = est.defect;
        j["ekm"] = step_function_json(est.f);
        if (opt.with_ena) j["ena"] = step_function_json(ektail::ena(view));
        with_output(opt.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    } else {
        const auto hazard = ektail::ena(view);
        with_output(opt.output, [&](std::ostream& out) {
            out << (opt.with_ena ? "x,ekm,ena,gamma_hat\n" : "x,ekm,gamma_hat\n");
            for (std::size_t i = 0; i < est.f.jump_count(); ++i) {
                out << ektail::format_double(est.f.jump_location(i)) << ','
                    << ektail::format_double(est.f.value_after(i));
                if (opt.with_ena) out << ',' << ektail::format_double(hazard.value_after(i));
                out << ',' << ektail::format_double(gamma_hat) << '\n';
            }
        });
    }
}

struct GofCurveOptions {
    std::string input, output;
    ektail::CsvColumns columns;
    std::size_t k_min = 20, k_max = 0, k_step = 1;
};

void run_gof_curve(const GofCurveOptions& opt) {
    const auto sorted = ektail::sort_with_concomitants(
        ektail::to_sample(load_records(opt.input, opt.columns)));
    const std::size_t k_max = opt.k_max == 0 ? sorted.size() / 2 : opt.k_max;
    if (opt.k_step == 0 || opt.k_min < 2 || k_max < opt.k_min)
        throw UsageError("need 2 <= k-min <= k-max and k-step >= 1");
    std::vector<std::size_t> grid;
    for (std::size_t k = opt.k_min; k <= k_max; k += opt.k_step) grid.push_back(k);
    const auto curve = ektail::gof_curve(sorted, grid);
    with_output(opt.output, [&](std::ostream& out) { ektail::write_gof_curve_csv(out, curve); });
}

struct SelectOptions {
    std::string input, output, rule = "ks";
    ektail::CsvColumns columns;
    double L = std::numeric_limits<double>::quiet_NaN();
    std::size_t k_min = 20, k_max = 0, k_step = 1;
    double fallback_fraction = 0.2;
    bool full_trace = false;
    unsigned threads = 1;
};

void run_select(const SelectOptions& opt) {
    ektail::SelectionConfig cfg;
    cfg.rule = parse_rule_name(opt.rule);
    if (cfg.rule != ektail::SelectionRule::RoT) {
        if (std::isnan(opt.L)) throw UsageError("--L is required for rules ks and cvm");
        cfg.L = opt.L;
    }
    cfg.k_min = opt.k_min;
    cfg.k_max = opt.k_max;
    cfg.k_step = opt.k_step;
    cfg.fallback_fraction = opt.fallback_fraction;
    cfg.full_trace = opt.full_trace;
    cfg.threads = opt.threads;

    const auto sample = ektail::to_sample(load_records(opt.input, opt.columns));
    const auto result = ektail::select_gof(sample, cfg);

    json j;
    j["schema_version"] = 1;
    j["rule"] = ektail::rule_name(result.rule);
    if (result.rule != ektail::SelectionRule::RoT) j["L"] = result.L;
    j["n"] = sample.size();
    j["k_selected"] = result.k_selected;
    j["gamma_hat"] = result.gamma_hat;
    j["used_fallback"] = result.used_fallback;
    json trace = json::array();
    for (const auto& tp : result.trace)
        trace.push_back({{"k", tp.k}, {"statistic", tp.statistic}, {"gamma_hat", tp.gamma_hat}});
    j["trace"] = trace;
    with_output(opt.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

struct SimulateLimitOptions {
    std::string output, samples_output;
    double p = 0.75;
    std::size_t paths = 10000;
    std::size_t grid_points = 2000;
    double grid_lo = 1e-4;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::vector<double> probs = {0.5, 0.75, 0.9, 0.95, 0.975, 0.99};
};

void run_simulate_limit(const SimulateLimitOptions& opt) {
    const auto grid = ektail::log_grid(opt.grid_lo, opt.grid_points);
    const auto samples = ektail::gof_limit_sample(opt.p, grid, opt.paths, opt.seed, opt.threads);
    if (!opt.samples_output.empty())
        with_output(opt.samples_output,
                    [&](std::ostream& out) { ektail::write_limit_samples_csv(out, samples); });
    with_output(opt.output, [&](std::ostream& out) {
        ektail::write_limit_quantiles_csv(out, samples, opt.probs);
    });
}

struct McOptions {
    std::string config, output, format = "csv";
    unsigned threads = 0;
    bool threads_set = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

ektail::ExperimentSpec base_spec_from(const json& cfg, const McOptions& opt) {
    ektail::ExperimentSpec spec;
    spec.dist_x = parse_dist(cfg.at("dist_x"), "dist_x");
    spec.dist_y = parse_dist(cfg.at("dist_y"), "dist_y");
    spec.reps = cfg.value("reps", spec.reps);
    spec.master_seed = opt.seed_set ? opt.seed : cfg.value("master_seed", spec.master_seed);
    spec.threads = opt.threads_set ? opt.threads : cfg.value("threads", 0u);
    return spec;
}

json mse_json(const ektail::MseTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["n"] = row.n;
        r["rule"] = ektail::rule_name(row.rule);
        if (row.rule != ektail::SelectionRule::RoT) r["L"] = row.L;
        r["mse_x100"] = row.mse_x100;
        r["mean_k"] = row.mean_k;
        r["fallback_count"] = row.fallback_count;
        r["reps"] = row.reps;
        rows.push_back(std::move(r));
    }
    return json{{"schema_version", 1}, {"rows", rows}};
}

json curves_json(const ektail::FiniteSampleCurves& curves) {
    json rows = json::array();
    for (std::size_t is = 0; is < curves.s_list.size(); ++is) {
        for (std::size_t ik = 0; ik < curves.k_grid.size(); ++ik) {
            json r;
            r["s"] = curves.s_list[is];
            r["k"] = curves.k_grid[ik];
            const auto set = [&r](const char* key, double v) {
                if (std::isfinite(v))
                    r[key] = v;
                else
                    r[key] = nullptr;
            };
            set("ena_mean", curves.ena_mean[is][ik]);
            set("ena_var", curves.ena_var[is][ik]);
            set("ekm_mean", curves.ekm_mean[is][ik]);
            set("ekm_var", curves.ekm_var[is][ik]);
            r["ena_ref_var"] = curves.ena_ref_var[is];
            r["ekm_ref_var"] = curves.ekm_ref_var[is];
            rows.push_back(std::move(r));
        }
    }
    return json{{"schema_version", 1}, {"reps", curves.reps}, {"rows", rows}};
}

void run_mc_table(const McOptions& opt) {
    const json cfg = load_config(opt.config);
    ektail::ExperimentSpec base = base_spec_from(cfg, opt);
    const auto ns = parse_n_list(cfg.at("n"));
    std::vector<ektail::SelectionConfig> rules;
    for (const auto& r : cfg.at("rules")) rules.push_back(parse_rule_json(r));

    ektail::MseTable table;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        ektail::ExperimentSpec spec = base;
        spec.n = ns[i];
        spec.master_seed = ektail::derive_seed(base.master_seed, i);
        const auto part = ektail::mse_study(spec, rules);
        table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
    }
    with_output(opt.output, [&](std::ostream& out) {
        if (opt.format == "json")
            out << mse_json(table).dump(2) << '\n';
        else
            ektail::write_mse_csv(out, table);
    });
}

void run_mc_curves(const McOptions& opt) {
    const json cfg = load_config(opt.config);
    ektail::ExperimentSpec spec = base_spec_from(cfg, opt);
    spec.n = cfg.at("n").get<std::size_t>();
    if (cfg.contains("s_list")) spec.s_list = cfg.at("s_list").get<std::vector<double>>();
    if (cfg.contains("k_grid")) {
        const auto& kg = cfg.at("k_grid");
        if (kg.is_array())
            spec.k_grid = kg.get<std::vector<std::size_t>>();
        else
            spec.k_grid = ektail::geometric_k_grid(kg.value("min", std::size_t{50}),
                                                   kg.value("max", spec.n / 2),
                                                   kg.value("points", std::size_t{30}));
    }
    const auto curves = ektail::finite_sample_study(spec);
    with_output(opt.output, [&](std::ostream& out) {
        if (opt.format == "json")
            out << curves_json(curves).dump(2) << '\n';
        else
            ektail::write_curves_csv(out, curves);
    });
}

struct WindowOptions {
    std::string input, output, mode = "rolling";
    ektail::CsvColumns columns{"z", "delta", "year"};
    int years = 4;
    std::optional<int> start_year, end_year;
    std::vector<std::string> rules;
};

void run_window_cmd(const WindowOptions& opt) {
    ektail::WindowSpec spec;
    if (opt.mode == "rolling")
        spec.mode = ektail::WindowMode::Rolling;
    else if (opt.mode == "growing")
        spec.mode = ektail::WindowMode::Growing;
    else
        throw UsageError("unknown mode '" + opt.mode + "' (expected rolling or growing)");
    spec.window_years = opt.years;
    spec.start_year = opt.start_year;
    spec.end_year = opt.end_year;

    std::vector<ektail::SelectionConfig> rules;
    if (opt.rules.empty()) {
        for (const char* r : {"rot", "ks:1.75", "cvm:0.5"}) rules.push_back(parse_rule_spec(r));
    } else {
        for (const auto& r : opt.rules) rules.push_back(parse_rule_spec(r));
    }

    const auto records = load_records(opt.input, opt.columns);
    const auto run = ektail::run_window(records, spec, rules);
    for (const auto& w : run.warnings) std::cerr << "warning: " << w << '\n';
    with_output(opt.output, [&](std::ostream& out) { ektail::write_window_csv(out, run.results); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail inference for randomly right-censored heavy-tailed data"};
    app.require_subcommand(1);

    EstimateOptions est_opt;
    auto* est = app.add_subcommand(
        "estimate", "Product-limit tail cdf, hazard and censored Hill estimate at one k");
    est->add_option("--input", est_opt.input, "input CSV")->required();
    est->add_option("--k", est_opt.k, "number of top order statistics")->required();
    est->add_flag("--ena", est_opt.with_ena, "include the cumulative hazard");
    est->add_option("--format", est_opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    est->add_option("--output", est_opt.output, "output file (default stdout)");
    est->add_option("--z-col", est_opt.columns.z, "claim size column name");
    est->add_option("--delta-col", est_opt.columns.delta, "uncensoring flag column name");

    GofCurveOptions gof_opt;
    auto* gofc = app.add_subcommand("gof-curve", "KS/CvM statistics over a grid of k");
    gofc->add_option("--input", gof_opt.input, "input CSV")->required();
    gofc->add_option("--k-min", gof_opt.k_min, "smallest k (default 20)");
    gofc->add_option("--k-max", gof_opt.k_max, "largest k (default n/2)");
    gofc->add_option("--k-step", gof_opt.k_step, "grid step (default 1)");
    gofc->add_option("--output", gof_opt.output, "output file (default stdout)");
    gofc->add_option("--z-col", gof_opt.columns.z, "claim size column name");
    gofc->add_option("--delta-col", gof_opt.columns.delta, "uncensoring flag column name");

    SelectOptions sel_opt;
    auto* sel = app.add_subcommand("select", "Automatic choice of the number of top order statistics");
    sel->add_option("--input", sel_opt.input, "input CSV")->required();
    sel->add_option("--rule", sel_opt.rule, "rot, ks or cvm")->required();
    sel->add_option("--L", sel_opt.L, "threshold for ks/cvm");
    sel->add_option("--k-min", sel_opt.k_min, "smallest candidate k (default 20)");
    sel->add_option("--k-max", sel_opt.k_max, "largest candidate k (default n/2)");
    sel->add_option("--k-step", sel_opt.k_step, "candidate step (default 1)");
    sel->add_option("--fallback-fraction", sel_opt.fallback_fraction,
                    "k/n used when no candidate passes (default 0.2)");
    sel->add_flag("--full-trace", sel_opt.full_trace, "evaluate the whole grid");
    sel->add_option("--threads", sel_opt.threads, "workers for --full-trace");
    sel->add_option("--output", sel_opt.output, "output file (default stdout)");
    sel->add_option("--z-col", sel_opt.columns.z, "claim size column name");
    sel->add_option("--delta-col", sel_opt.columns.delta, "uncensoring flag column name");

    SimulateLimitOptions sim_opt;
    auto* sim = app.add_subcommand("simulate-limit",
                                   "Quantiles of the limit laws of the GoF statistics");
    sim->add_option("--p", sim_opt.p, "tail uncensoring frequency in (0,1]")->required();
    sim->add_option("--paths", sim_opt.paths, "number of simulated paths (default 10000)");
    sim->add_option("--grid", sim_opt.grid_points, "grid points (default 2000)");
    sim->add_option("--grid-lo", sim_opt.grid_lo, "left end of the log grid (default 1e-4)");
    sim->add_option("--seed", sim_opt.seed, "master seed (default 1)");
    sim->add_option("--threads", sim_opt.threads, "worker threads (default: all cores)");
    sim->add_option("--probs", sim_opt.probs, "quantile probabilities");
    sim->add_option("--samples", sim_opt.samples_output, "also dump raw samples to this CSV");
    sim->add_option("--output", sim_opt.output, "quantile CSV (default stdout)");

    McOptions table_opt;
    auto* mct = app.add_subcommand("mc-table", "Selection-rule MSE table from a JSON config");
    mct->add_option("--config", table_opt.config, "experiment JSON")->required();
    mct->add_option("--output", table_opt.output, "output file (default stdout)");
    mct->add_option("--format", table_opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    mct->add_option("--seed", table_opt.seed, "override the config master seed")
        ->each([&](const std::string&) { table_opt.seed_set = true; });
    mct->add_option("--threads", table_opt.threads, "worker threads")
        ->each([&](const std::string&) { table_opt.threads_set = true; });

    McOptions curves_opt;
    auto* mcc = app.add_subcommand("mc-curves",
                                   "Finite-sample bias/variance curves from a JSON config");
    mcc->add_option("--config", curves_opt.config, "experiment JSON")->required();
    mcc->add_option("--output", curves_opt.output, "output file (default stdout)");
    mcc->add_option("--format", curves_opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    mcc->add_option("--seed", curves_opt.seed, "override the config master seed")
        ->each([&](const std::string&) { curves_opt.seed_set = true; });
    mcc->add_option("--threads", curves_opt.threads, "worker threads")
        ->each([&](const std::string&) { curves_opt.threads_set = true; });

    WindowOptions win_opt;
    auto* win = app.add_subcommand("window", "Rolling/growing-window tail estimates");
    win->add_option("--input", win_opt.input, "input CSV with a year column")->required();
    win->add_option("--mode", win_opt.mode, "rolling or growing")
        ->check(CLI::IsMember({"rolling", "growing"}));
    win->add_option("--years", win_opt.years, "window span in years (default 4)");
    win->add_option("--start-year", win_opt.start_year, "first year (default: data minimum)");
    win->add_option("--end-year", win_opt.end_year, "last year (default: data maximum)");
    win->add_option("--rule", win_opt.rules,
                    "rule spec, repeatable: rot, ks:L or cvm:L (default all three)");
    win->add_option("--output", win_opt.output, "output CSV (default stdout)");
    win->add_option("--z-col", win_opt.columns.z, "claim size column name");
    win->add_option("--delta-col", win_opt.columns.delta, "uncensoring flag column name");
    win->add_option("--year-col", win_opt.columns.year, "year column name (default 'year')");

    est->callback([&] { run_estimate(est_opt); });
    gofc->callback([&] { run_gof_curve(gof_opt); });
    sel->callback([&] { run_select(sel_opt); });
    sim->callback([&] { run_simulate_limit(sim_opt); });
    mct->callback([&] { run_mc_table(table_opt); });
    mcc->callback([&] { run_mc_curves(curves_opt); });
    win->callback([&] { run_window_cmd(win_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
