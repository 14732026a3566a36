// CSV writers for the analysis outputs. Derived statistics are written with
// 10 significant digits; absent values (e.g. variance of a single replication)
// become empty fields.
#pragma once

#include <cmath>
#include <ostream>
#include <span>

#include "ektail/csv.hpp"
#include "ektail/gof.hpp"
#include "ektail/limit_process.hpp"
#include "ektail/montecarlo.hpp"
#include "ektail/selection.hpp"
#include "ektail/window.hpp"

namespace ektail {

namespace detail {

inline std::string field(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace detail

inline void write_gof_curve_csv(std::ostream& out, std::span<const GofResult> curve) {
    out << "k,ks,cvm,gamma_hat\n";
    for (const auto& g : curve)
        out << g.k << ',' << detail::field(g.ks) << ',' << detail::field(g.cvm) << ','
            << detail::field(g.gamma_hat) << '\n';
}

inline void write_mse_csv(std::ostream& out, const MseTable& table) {
    out << "n,rule,L,mse_x100,mean_k,fallback_count,reps\n";
    for (const auto& row : table.rows) {
        out << row.n << ',' << rule_name(row.rule) << ',';
        if (row.rule != SelectionRule::RoT) out << format_double(row.L);
        out << ',' << detail::field(row.mse_x100) << ',' << detail::field(row.mean_k) << ','
            << row.fallback_count << ',' << row.reps << '\n';
    }
}

inline void write_curves_csv(std::ostream& out, const FiniteSampleCurves& curves) {
    out << "s,k,ena_mean,ena_var,ekm_mean,ekm_var,ena_ref_var,ekm_ref_var\n";
    for (std::size_t is = 0; is < curves.s_list.size(); ++is)
        for (std::size_t ik = 0; ik < curves.k_grid.size(); ++ik)
            out << format_double(curves.s_list[is]) << ',' << curves.k_grid[ik] << ','
                << detail::field(curves.ena_mean[is][ik]) << ','
                << detail::field(curves.ena_var[is][ik]) << ','
                << detail::field(curves.ekm_mean[is][ik]) << ','
                << detail::field(curves.ekm_var[is][ik]) << ','
                << detail::field(curves.ena_ref_var[is]) << ','
                << detail::field(curves.ekm_ref_var[is]) << '\n';
}

inline void write_window_csv(std::ostream& out, std::span<const WindowResult> results) {
    out << "start_year,end_year,rule,L,n,k,gamma_hat,used_fallback,censored_fraction\n";
    for (const auto& w : results) {
        out << w.start_year << ',' << w.end_year << ',' << rule_name(w.rule) << ',';
        if (w.rule != SelectionRule::RoT) out << format_double(w.L);
        out << ',' << w.n << ',' << w.k << ',' << detail::field(w.gamma_hat) << ','
            << (w.used_fallback ? 1 : 0) << ',' << detail::field(w.censored_fraction) << '\n';
    }
}

inline void write_limit_samples_csv(std::ostream& out, const GofLimitSample& samples) {
    out << "path,ks_limit,cvm_limit\n";
    for (std::size_t i = 0; i < samples.ks.size(); ++i)
        out << i << ',' << detail::field(samples.ks[i]) << ',' << detail::field(samples.cvm[i])
            << '\n';
}

inline void write_limit_quantiles_csv(std::ostream& out, const GofLimitSample& samples,
                                      std::span<const double> probs) {
    out << "prob,ks_limit,cvm_limit\n";
    for (double prob : probs)
        out << format_double(prob) << ',' << detail::field(sample_quantile(samples.ks, prob))
            << ',' << detail::field(sample_quantile(samples.cvm, prob)) << '\n';
}

}  // namespace ektail
