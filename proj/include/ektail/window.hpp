// Rolling- and growing-window tail estimation over dated claim records.
#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ektail/csv.hpp"
#include "ektail/selection.hpp"

namespace ektail {

enum class WindowMode { Rolling, Growing };

// A window covers the inclusive year range [start, start + window_years]
// (rolling) or [start_year, end] with growing right edge. The first window in
// both modes is [start_year, start_year + window_years].
struct WindowSpec {
    WindowMode mode = WindowMode::Rolling;
    int window_years = 4;
    std::optional<int> start_year;  // defaults to the earliest year in the data
    std::optional<int> end_year;    // defaults to the latest year in the data
};

struct WindowResult {
    int start_year = 0;
    int end_year = 0;
    SelectionRule rule = SelectionRule::RoT;
    double L = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    double gamma_hat = 0.0;
    bool used_fallback = false;
    double censored_fraction = 0.0;
};

struct WindowRun {
    std::vector<WindowResult> results;
    std::vector<std::string> warnings;  // empty or unusable windows
};

inline WindowRun run_window(std::span<const ClaimRecord> records, const WindowSpec& spec,
                            std::span<const SelectionConfig> rules) {
    if (spec.window_years < 1)
        throw std::invalid_argument("run_window: window_years must be >= 1");
    if (rules.empty()) throw std::invalid_argument("run_window: rules must be nonempty");
    if (records.empty()) throw std::invalid_argument("run_window: no records");
    for (const auto& r : records)
        if (!r.year) throw std::invalid_argument("run_window: records must carry years");

    int lo = records[0].year.value(), hi = lo;
    for (const auto& r : records) {
        lo = std::min(lo, r.year.value());
        hi = std::max(hi, r.year.value());
    }
    const int start = spec.start_year.value_or(lo);
    const int end = spec.end_year.value_or(hi);
    if (start > end) throw std::invalid_argument("run_window: start_year exceeds end_year");

    std::vector<std::pair<int, int>> windows;
    if (spec.mode == WindowMode::Rolling) {
        for (int y = start; y + spec.window_years <= end; ++y)
            windows.emplace_back(y, y + spec.window_years);
    } else {
        for (int e = start + spec.window_years; e <= end; ++e) windows.emplace_back(start, e);
    }

    WindowRun run;
    if (windows.empty()) {
        run.warnings.push_back("no complete windows in year range " + std::to_string(start) +
                               "-" + std::to_string(end));
        return run;
    }

    for (const auto& [a, b] : windows) {
        CensoredSample sub;
        std::size_t censored = 0;
        for (const auto& r : records) {
            const int y = r.year.value();
            if (y < a || y > b) continue;
            sub.z.push_back(r.z);
            sub.delta.push_back(r.delta);
            censored += r.delta ? 0 : 1;
        }
        const std::string label = std::to_string(a) + "-" + std::to_string(b);
        if (sub.size() == 0) {
            run.warnings.push_back("window " + label + ": no records; skipped");
            continue;
        }
        const SortedCensoredSample sorted = sort_with_concomitants(sub);
        const double cens_frac =
            static_cast<double>(censored) / static_cast<double>(sub.size());
        for (const auto& rule : rules) {
            try {
                const SelectionResult sel = select_gof(sorted, rule);
                run.results.push_back({a, b, rule.rule, rule.L, sub.size(), sel.k_selected,
                                       sel.gamma_hat, sel.used_fallback, cens_frac});
            } catch (const std::invalid_argument& e) {
                run.warnings.push_back("window " + label + ", rule " +
                                       rule_name(rule.rule) + ": " + e.what() + "; skipped");
            }
        }
    }
    return run;
}

}  // namespace ektail
