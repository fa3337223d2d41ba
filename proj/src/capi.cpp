// C surface of the solver. Opaque handles own plain C++ objects; every entry
// point traps exceptions and converts them to status codes, leaving the
// message in a thread-local buffer for soalm_last_error().

#include "soalm/soalm.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "soalm/config.hpp"
#include "soalm/diagnostics.hpp"
#include "soalm/multipliers.hpp"
#include "soalm/report_io.hpp"

using namespace soalm;

struct soalm_problem {
  Program prog;
  Vector x0;
};

struct soalm_report {
  SolveReport rep;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int translate(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return SOALM_ERR_CONFIG;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return SOALM_ERR_INVALID_ARG;
  return SOALM_ERR_NUMERIC;
}

SolveOptions to_solve_options(const soalm_options& o, const soalm_problem& p) {
  SolveOptions so;
  so.method = o.method == SOALM_METHOD_FIRST ? Method::First : Method::Second;
  so.c = o.c;
  so.outer_tol = o.outer_tol;
  so.max_outer = o.max_outer;
  so.inner.tol = o.inner_tol;
  so.inner.max_iter = o.max_inner;
  so.track_reference = o.track_reference != 0;
  so.eta_stop = o.eta_stop;
  so.x_start = p.x0;
  return so;
}

Vector default_y0(const Program& prog) {
  const int need = prog.m + prog.cone.dim();
  if (prog.name == "nlp_toy" && need == 2) return {100.0, 100.0};
  return Vector(size_t(need), 0.0);
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

extern "C" {

void soalm_options_init(soalm_options* opt) {
  if (!opt) return;
  opt->c = 1.0;
  opt->method = SOALM_METHOD_SECOND;
  opt->outer_tol = 1e-12;
  opt->max_outer = 100;
  opt->inner_tol = 1e-12;
  opt->max_inner = 100;
  opt->track_reference = 0;
  opt->eta_stop = 1e-20;
}

int soalm_problem_builtin(const char* name, soalm_problem** out) {
  if (!name || !out) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    Program prog = builtin(name);
    Vector x0(size_t(prog.n), 0.0);
    *out = new soalm_problem{std::move(prog), std::move(x0)};
    return SOALM_OK;
  } catch (const std::invalid_argument& e) {
    return fail(SOALM_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(translate(e), e.what());
  }
}

int soalm_problem_from_json(const char* json_text, soalm_problem** out) {
  if (!json_text || !out) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    LoadedProblem lp = load_problem_json(json_text);
    *out = new soalm_problem{std::move(lp.program), std::move(lp.x0)};
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(translate(e), e.what());
  }
}

int soalm_problem_from_json_file(const char* path, soalm_problem** out) {
  if (!path || !out) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  try {
    LoadedProblem lp = load_problem_file(path);
    *out = new soalm_problem{std::move(lp.program), std::move(lp.x0)};
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(translate(e), e.what());
  }
}

void soalm_problem_free(soalm_problem* p) { delete p; }

int soalm_problem_primal_dim(const soalm_problem* p) { return p ? p->prog.n : 0; }

int soalm_problem_eq_count(const soalm_problem* p) { return p ? p->prog.m : 0; }

int soalm_problem_cone_dim(const soalm_problem* p) {
  return p ? p->prog.cone.dim() : 0;
}

int soalm_problem_has_reference(const soalm_problem* p) {
  return p && p->prog.reference.has_value() ? 1 : 0;
}

int soalm_problem_reference_multipliers(const soalm_problem* p, double* y, int len) {
  if (!p || !y) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  if (!p->prog.reference)
    return fail(SOALM_ERR_INVALID_ARG, "problem has no reference point");
  try {
    Vector ystar = p->prog.reference_multipliers();
    if (len != int(ystar.size()))
      return fail(SOALM_ERR_INVALID_ARG,
                  "y must have length " + std::to_string(ystar.size()));
    for (int i = 0; i < len; ++i) y[i] = ystar[i];
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(translate(e), e.what());
  }
}

int soalm_solve(const soalm_problem* p, const soalm_options* opt, const double* y0,
                int y0_len, soalm_report** out) {
  if (!p || !out) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  *out = nullptr;
  soalm_options o;
  soalm_options_init(&o);
  if (opt) o = *opt;

  const int need = p->prog.m + p->prog.cone.dim();
  Vector y;
  if (y0 == nullptr) {
    y = default_y0(p->prog);
  } else {
    if (y0_len != need)
      return fail(SOALM_ERR_INVALID_ARG,
                  "y0 must have length " + std::to_string(need));
    y.assign(y0, y0 + y0_len);
  }

  try {
    SolveReport r = solve(p->prog, y, to_solve_options(o, *p));
    auto* rep = new soalm_report{std::move(r)};
    *out = rep;
    if (rep->rep.inner_failed)
      return fail(SOALM_ERR_INNER_FAIL, "inner minimization failed");
    if (!rep->rep.converged)
      return fail(SOALM_ERR_MAX_OUTER, "outer iteration cap reached");
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(translate(e), e.what());
  }
}

void soalm_report_free(soalm_report* r) { delete r; }

int soalm_report_converged(const soalm_report* r) {
  return r && r->rep.converged ? 1 : 0;
}

int soalm_report_outer_iterations(const soalm_report* r) {
  return r ? r->rep.outer_iterations() : 0;
}

int soalm_report_fallback_count(const soalm_report* r) {
  return r ? r->rep.fallback_count() : 0;
}

double soalm_report_kkt_total(const soalm_report* r) {
  return r ? r->rep.kkt_total() : nan_value();
}

double soalm_report_linear_rate(const soalm_report* r) {
  return r && r->rep.rate ? r->rep.rate->linear_rate : nan_value();
}

double soalm_report_order_estimate(const soalm_report* r) {
  return r && r->rep.rate ? r->rep.rate->order_q : nan_value();
}

int soalm_report_history_length(const soalm_report* r) {
  return r ? int(r->rep.history.size()) : 0;
}

int soalm_report_history_row(const soalm_report* r, int k, double* eta,
                             double* kkt_total, double* step_norm, int* fallback) {
  if (!r) return fail(SOALM_ERR_INVALID_ARG, "null report");
  if (k < 0 || k >= int(r->rep.history.size()))
    return fail(SOALM_ERR_INVALID_ARG, "history index out of range");
  const HistoryEntry& e = r->rep.history[size_t(k)];
  if (eta) *eta = e.eta;
  if (kkt_total) *kkt_total = e.kkt.total();
  if (step_norm) *step_norm = e.step_norm;
  if (fallback) *fallback = e.fallback ? 1 : 0;
  return SOALM_OK;
}

int soalm_report_multipliers(const soalm_report* r, double* y, int len) {
  if (!r || !y) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  if (r->rep.history.empty())
    return fail(SOALM_ERR_INVALID_ARG, "report has no iterates");
  const HistoryEntry& e = r->rep.history.back();
  const int need = int(e.lambda.size() + e.mu.size());
  if (len != need)
    return fail(SOALM_ERR_INVALID_ARG, "y must have length " + std::to_string(need));
  int i = 0;
  for (double v : e.lambda) y[i++] = v;
  for (double v : e.mu) y[i++] = v;
  return SOALM_OK;
}

int soalm_report_write_csv(const soalm_report* r, const char* path) {
  if (!r || !path) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  try {
    write_text_file(path, report_csv(r->rep));
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(SOALM_ERR_IO, e.what());
  }
}

int soalm_report_write_plot(const soalm_report* r, const char* path) {
  if (!r || !path) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  try {
    write_text_file(path, report_plot_data(r->rep));
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(SOALM_ERR_IO, e.what());
  }
}

int soalm_report_summary_json(const soalm_report* r, char** out_json) {
  if (!r || !out_json) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  *out_json = dup_string(report_summary_json(r->rep));
  if (!*out_json) return fail(SOALM_ERR_NUMERIC, "out of memory");
  return SOALM_OK;
}

int soalm_write_compare_csv(const soalm_report* first_order,
                            const soalm_report* second_order, const char* path) {
  if (!first_order || !second_order || !path)
    return fail(SOALM_ERR_INVALID_ARG, "null argument");
  try {
    write_text_file(path, compare_csv(first_order->rep, second_order->rep));
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(SOALM_ERR_IO, e.what());
  }
}

int soalm_write_compare_plot(const soalm_report* first_order,
                             const soalm_report* second_order, const char* path) {
  if (!first_order || !second_order || !path)
    return fail(SOALM_ERR_INVALID_ARG, "null argument");
  try {
    write_text_file(path, compare_plot_data(first_order->rep, second_order->rep));
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(SOALM_ERR_IO, e.what());
  }
}

int soalm_check(const soalm_problem* p, const soalm_options* opt, char** out_json,
                int* all_pass) {
  if (!p || !out_json || !all_pass) return fail(SOALM_ERR_INVALID_ARG, "null argument");
  *out_json = nullptr;
  *all_pass = 0;
  soalm_options o;
  soalm_options_init(&o);
  if (opt) o = *opt;

  try {
    Vector x, lam, mu;
    if (p->prog.reference) {
      x = p->prog.reference->x;
      lam = p->prog.reference->lambda;
      mu = p->prog.reference->mu;
    } else {
      // no reference: check at the result of a converged second-order solve
      SolveOptions so = to_solve_options(o, *p);
      so.method = Method::Second;
      SolveReport r = solve(p->prog, default_y0(p->prog), so);
      if (r.inner_failed)
        return fail(SOALM_ERR_INNER_FAIL, "inner minimization failed");
      if (!r.converged)
        return fail(SOALM_ERR_MAX_OUTER, "solve did not converge, nothing to check");
      const HistoryEntry& e = r.history.back();
      x = e.x;
      lam = e.lambda;
      mu = e.mu;
    }

    nlohmann::json out;
    bool ok = true;

    DerivativeReport dr = check_derivatives(p->prog, x, lam, mu);
    out["derivatives"] = {{"pass", dr.pass},
                          {"max_rel_dev", dr.max_rel_dev},
                          {"worst", dr.worst}};
    ok = ok && dr.pass;

    bool orthant_only = true;
    for (const auto& b : p->prog.cone.blocks())
      if (b.kind != BlockKind::Orthant) orthant_only = false;
    if (orthant_only) {
      RankReport lr = check_licq(p->prog, x);
      out["licq"] = {{"applicable", true},
                     {"pass", lr.pass},
                     {"rows", lr.rows},
                     {"smallest_sv", lr.smallest_sv},
                     {"largest_sv", lr.largest_sv}};
      ok = ok && lr.pass;
    } else {
      out["licq"] = {{"applicable", false}};
    }

    try {
      RankReport nd = check_nondegeneracy(p->prog, x);
      out["nondegeneracy"] = {{"pass", nd.pass},
                              {"rows", nd.rows},
                              {"smallest_sv", nd.smallest_sv},
                              {"largest_sv", nd.largest_sv}};
      ok = ok && nd.pass;
    } catch (const std::exception& e) {
      out["nondegeneracy"] = {{"pass", false}, {"error", e.what()}};
      ok = false;
    }

    try {
      SsoscReport ss = check_ssosc(p->prog, x, lam, mu);
      out["ssosc"] = {{"pass", ss.pass},
                      {"min_eig", ss.min_eig},
                      {"subspace_dim", ss.subspace_dim}};
      ok = ok && ss.pass;
    } catch (const std::exception& e) {
      out["ssosc"] = {{"pass", false}, {"error", e.what()}};
      ok = false;
    }

    AssumptionReport ar = check_assumptions(p->prog, o.c, x, lam, mu);
    out["assumptions"] = {{"pass", ar.pass},
                          {"min_eig_A", ar.min_eig_A},
                          {"max_eig_V", ar.max_eig_V},
                          {"sampled", ar.sampled},
                          {"detail", ar.detail}};
    ok = ok && ar.pass;

    out["all_pass"] = ok;
    *all_pass = ok ? 1 : 0;
    *out_json = dup_string(out.dump(2) + "\n");
    if (!*out_json) return fail(SOALM_ERR_NUMERIC, "out of memory");
    return SOALM_OK;
  } catch (const std::exception& e) {
    return fail(translate(e), e.what());
  }
}

void soalm_string_free(char* s) { std::free(s); }

const char* soalm_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
