// Report writers. Numbers go through %.17g so values round-trip exactly and
// repeated runs produce byte-identical files.

#include "soalm/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace soalm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double log_eta(double eta) {
  if (std::isnan(eta)) return eta;
  return eta > 1e-50 ? std::log10(eta) : -50.0;
}

double eta_at(const std::vector<HistoryEntry>& h, size_t k) {
  if (h.empty()) return std::numeric_limits<double>::quiet_NaN();
  return h[std::min(k, h.size() - 1)].eta;  // shorter runs pad with the final eta
}

}  // namespace

std::string report_csv(const SolveReport& r) {
  std::string out =
      "k,eta,kkt_stat,kkt_feas_eq,kkt_feas_cone,kkt_dual,kkt_comp,step_norm,"
      "fallback\n";
  for (const auto& e : r.history) {
    out += std::to_string(e.k);
    out += "," + num(e.eta);
    out += "," + num(e.kkt.stationarity);
    out += "," + num(e.kkt.eq_feas);
    out += "," + num(e.kkt.cone_feas);
    out += "," + num(e.kkt.dual_feas);
    out += "," + num(e.kkt.complementarity);
    out += "," + num(e.step_norm);
    out += e.fallback ? ",1\n" : ",0\n";
  }
  return out;
}

std::string report_plot_data(const SolveReport& r) {
  std::string out = "k,log10_eta\n";
  for (const auto& e : r.history)
    out += std::to_string(e.k) + "," + num(log_eta(e.eta)) + "\n";
  return out;
}

std::string report_summary_json(const SolveReport& r) {
  nlohmann::json j;
  j["problem"] = r.problem;
  j["method"] = r.method;
  j["c"] = r.c;
  j["converged"] = r.converged;
  j["outer_iterations"] = r.outer_iterations();
  j["kkt_total"] = r.kkt_total();
  j["fallback_count"] = r.fallback_count();
  if (r.rate) {
    j["linear_rate"] = r.rate->linear_rate;
    j["order_q"] = r.rate->order_q;
  } else {
    j["linear_rate"] = nullptr;
    j["order_q"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string compare_csv(const SolveReport& first, const SolveReport& second) {
  std::string out = "k,eta_first,eta_second\n";
  size_t rows = std::max(first.history.size(), second.history.size());
  for (size_t k = 0; k < rows; ++k)
    out += std::to_string(k) + "," + num(eta_at(first.history, k)) + "," +
           num(eta_at(second.history, k)) + "\n";
  return out;
}

std::string compare_plot_data(const SolveReport& first, const SolveReport& second) {
  std::string out = "k,log10_eta_first,log10_eta_second\n";
  size_t rows = std::max(first.history.size(), second.history.size());
  for (size_t k = 0; k < rows; ++k)
    out += std::to_string(k) + "," + num(log_eta(eta_at(first.history, k))) + "," +
           num(log_eta(eta_at(second.history, k))) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace soalm
