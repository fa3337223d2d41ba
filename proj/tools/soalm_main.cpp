// Command line front end. Talks to the solver exclusively through the C API,
// so it doubles as a smoke test of the shared library surface.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soalm/soalm.h"

namespace {

int exit_code(int status) {
  switch (status) {
    case SOALM_OK:
      return 0;
    case SOALM_ERR_MAX_OUTER:
      return 2;
    case SOALM_ERR_INNER_FAIL:
      return 4;
    case SOALM_ERR_IO:
      return 5;
    case SOALM_ERR_CONFIG:
    case SOALM_ERR_INVALID_ARG:
      return 3;  // both are bad run configurations from the CLI's viewpoint
    default:
      return 6;
  }
}

int complain(int status) {
  std::fprintf(stderr, "error: %s\n", soalm_last_error());
  return exit_code(status);
}

int load_problem(const std::string& ref, soalm_problem** out) {
  const std::string ext = ".json";
  if (ref.size() > ext.size() &&
      ref.compare(ref.size() - ext.size(), ext.size(), ext) == 0)
    return soalm_problem_from_json_file(ref.c_str(), out);
  return soalm_problem_builtin(ref.c_str(), out);
}

bool parse_y0(const std::string& text, std::vector<double>& out) {
  out.clear();
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return !out.empty();
}

struct CommonArgs {
  std::string problem;
  std::string y0_text;
  double c = 1.0;
  double outer_tol = 1e-12;
  double inner_tol = 1e-12;
  int max_outer = 100;
  int max_inner = 100;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--problem", a.problem, "builtin name or .json config path")
      ->required();
  cmd->add_option("--c", a.c, "penalty parameter");
  cmd->add_option("--y0", a.y0_text, "comma separated initial multipliers");
  cmd->add_option("--outer-tol", a.outer_tol, "stop on this total KKT residual");
  cmd->add_option("--max-outer", a.max_outer, "outer iteration cap");
  cmd->add_option("--inner-tol", a.inner_tol, "inner gradient norm tolerance");
  cmd->add_option("--max-inner", a.max_inner, "inner iteration cap");
}

// y0 comes back empty when the flag was not given; a parse or dimension
// problem returns false
bool resolve_y0(const CommonArgs& a, const soalm_problem* p, std::vector<double>& y0) {
  if (a.y0_text.empty()) {
    y0.clear();
    return true;
  }
  if (!parse_y0(a.y0_text, y0)) {
    std::fprintf(stderr, "error: --y0 must be a comma separated number list\n");
    return false;
  }
  const int need = soalm_problem_eq_count(p) + soalm_problem_cone_dim(p);
  if (int(y0.size()) != need) {
    std::fprintf(stderr, "error: --y0 must have %d entries for this problem\n", need);
    return false;
  }
  return true;
}

void fill_options(const CommonArgs& a, soalm_options* opt) {
  soalm_options_init(opt);
  opt->c = a.c;
  opt->outer_tol = a.outer_tol;
  opt->max_outer = a.max_outer;
  opt->inner_tol = a.inner_tol;
  opt->max_inner = a.max_inner;
}

int run_solve(const CommonArgs& a, const std::string& method, bool reference,
              const std::string& report_path, const std::string& json_path,
              const std::string& plot_path) {
  if (method != "first" && method != "second") {
    std::fprintf(stderr, "error: --method must be first or second\n");
    return 3;
  }
  soalm_problem* p = nullptr;
  int rc = load_problem(a.problem, &p);
  if (rc != SOALM_OK) return complain(rc);

  std::vector<double> y0;
  if (!resolve_y0(a, p, y0)) {
    soalm_problem_free(p);
    return 3;
  }

  soalm_options opt;
  fill_options(a, &opt);
  opt.method = method == "first" ? SOALM_METHOD_FIRST : SOALM_METHOD_SECOND;
  opt.track_reference = reference ? 1 : 0;

  soalm_report* rep = nullptr;
  rc = soalm_solve(p, &opt, y0.empty() ? nullptr : y0.data(), int(y0.size()), &rep);
  if (rc != SOALM_OK && rc != SOALM_ERR_MAX_OUTER && rc != SOALM_ERR_INNER_FAIL) {
    soalm_problem_free(p);
    return complain(rc);
  }
  if (rc != SOALM_OK) std::fprintf(stderr, "warning: %s\n", soalm_last_error());

  // reports are still written for cap and inner-failure outcomes
  int final_status = rc;
  auto write_one = [&](int wrc) {
    if (wrc != SOALM_OK) {
      std::fprintf(stderr, "error: %s\n", soalm_last_error());
      if (final_status == SOALM_OK) final_status = wrc;
    }
  };
  if (rep && !report_path.empty())
    write_one(soalm_report_write_csv(rep, report_path.c_str()));
  if (rep && !plot_path.empty())
    write_one(soalm_report_write_plot(rep, plot_path.c_str()));

  if (rep) {
    char* summary = nullptr;
    if (soalm_report_summary_json(rep, &summary) == SOALM_OK) {
      std::fputs(summary, stdout);
      if (!json_path.empty()) {
        FILE* f = std::fopen(json_path.c_str(), "wb");
        if (!f || std::fputs(summary, f) < 0) {
          std::fprintf(stderr, "error: cannot write %s\n", json_path.c_str());
          if (final_status == SOALM_OK) final_status = SOALM_ERR_IO;
        }
        if (f) std::fclose(f);
      }
      soalm_string_free(summary);
    }
  }

  soalm_report_free(rep);
  soalm_problem_free(p);
  return exit_code(final_status);
}

int run_compare(const CommonArgs& a, const std::string& report_path,
                const std::string& plot_path) {
  soalm_problem* p = nullptr;
  int rc = load_problem(a.problem, &p);
  if (rc != SOALM_OK) return complain(rc);

  std::vector<double> y0;
  if (!resolve_y0(a, p, y0)) {
    soalm_problem_free(p);
    return 3;
  }

  soalm_options opt;
  fill_options(a, &opt);
  opt.track_reference = 1;  // the comparison is about the error trajectories

  const double* y0p = y0.empty() ? nullptr : y0.data();
  soalm_report* first = nullptr;
  soalm_report* second = nullptr;
  opt.method = SOALM_METHOD_FIRST;
  int rc1 = soalm_solve(p, &opt, y0p, int(y0.size()), &first);
  opt.method = SOALM_METHOD_SECOND;
  int rc2 = soalm_solve(p, &opt, y0p, int(y0.size()), &second);

  int final_status = rc1 != SOALM_OK ? rc1 : rc2;
  if (final_status != SOALM_OK) std::fprintf(stderr, "warning: %s\n", soalm_last_error());

  if (first && second) {
    auto write_one = [&](int wrc) {
      if (wrc != SOALM_OK) {
        std::fprintf(stderr, "error: %s\n", soalm_last_error());
        if (final_status == SOALM_OK) final_status = wrc;
      }
    };
    if (!report_path.empty())
      write_one(soalm_write_compare_csv(first, second, report_path.c_str()));
    if (!plot_path.empty())
      write_one(soalm_write_compare_plot(first, second, plot_path.c_str()));
  }

  soalm_report_free(first);
  soalm_report_free(second);
  soalm_problem_free(p);
  return exit_code(final_status);
}

int run_check(const CommonArgs& a) {
  soalm_problem* p = nullptr;
  int rc = load_problem(a.problem, &p);
  if (rc != SOALM_OK) return complain(rc);

  soalm_options opt;
  fill_options(a, &opt);
  char* json = nullptr;
  int all_pass = 0;
  rc = soalm_check(p, &opt, &json, &all_pass);
  if (rc != SOALM_OK) {
    soalm_problem_free(p);
    return complain(rc);
  }
  std::fputs(json, stdout);
  soalm_string_free(json);
  soalm_problem_free(p);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augmented Lagrangian solver for equality and conic constraints"};
  app.require_subcommand(1);

  CommonArgs solve_args;
  std::string method = "second";
  bool reference = false;
  std::string report_path, json_path, plot_path;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one multiplier method");
  add_common(solve_cmd, solve_args);
  solve_cmd->add_option("--method", method, "first or second (default second)");
  solve_cmd->add_flag("--reference", reference,
                      "track the error against the reference solution");
  solve_cmd->add_option("--report", report_path, "write the iteration CSV here");
  solve_cmd->add_option("--json", json_path, "write the summary JSON here");
  solve_cmd->add_option("--plot-data", plot_path, "write log10 error rows here");

  CommonArgs compare_args;
  std::string cmp_report, cmp_plot;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run both methods and tabulate the errors");
  add_common(compare_cmd, compare_args);
  compare_cmd->add_option("--report", cmp_report, "write the combined CSV here");
  compare_cmd->add_option("--plot-data", cmp_plot, "write combined log10 rows here");

  CommonArgs check_args;
  CLI::App* check_cmd =
      app.add_subcommand("check", "optimality diagnostics at the reference");
  add_common(check_cmd, check_args);

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed())
    return run_solve(solve_args, method, reference, report_path, json_path,
                     plot_path);
  if (compare_cmd->parsed()) return run_compare(compare_args, cmp_report, cmp_plot);
  return run_check(check_args);
}
