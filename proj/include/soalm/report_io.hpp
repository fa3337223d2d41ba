// Deterministic report writers: iteration CSV, log-error plot data, JSON
// summaries, and the two-method comparison files.
#pragma once

#include <string>

#include "soalm/multipliers.hpp"

namespace soalm {

// Header: k,eta,kkt_stat,kkt_feas_eq,kkt_feas_cone,kkt_dual,kkt_comp,step_norm,fallback
std::string report_csv(const SolveReport& r);

// Rows "k,log10_eta"; eta clamped below 1e-50 before the log.
std::string report_plot_data(const SolveReport& r);

// {problem, method, c, converged, outer_iterations, kkt_total, linear_rate,
//  order_q, fallback_count}; rate fields are null when not computable.
std::string report_summary_json(const SolveReport& r);

// "k,eta_first,eta_second"; the shorter history is padded with its final eta.
std::string compare_csv(const SolveReport& first, const SolveReport& second);

// "k,log10_eta_first,log10_eta_second" with the 1e-50 clamp.
std::string compare_plot_data(const SolveReport& first, const SolveReport& second);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace soalm
