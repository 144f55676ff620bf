// Convergence-study CLI for the SDG nonlinear elliptic solver. Talks to the
// shared library exclusively through the public C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdg/sdg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitConfigError = 3;

int fail(const char* stage, sdg_status status) {
  std::fprintf(stderr, "sdg: %s: %s\n", stage, sdg_last_error());
  return status == SDG_ERR_INVALID_ARGUMENT ? kExitConfigError : kExitError;
}

struct StudyOptions {
  std::string solution = "u1";
  std::string rho = "rho1";
  int degree = 1;
  std::vector<int> meshes = {4, 8, 16, 32, 64};
  double tol = 1e-10;
  int max_iters = 100;
  std::string format = "md";
  std::string out;
  std::string init = "linear";
  std::string stop_norm = "l2";
  bool line_search = false;
  unsigned long long seed = 0;
};

int run_study(const StudyOptions& opt) {
  sdg_study_config* config = sdg_study_config_create();
  if (!config) {
    std::fprintf(stderr, "sdg: out of memory\n");
    return kExitError;
  }
  struct ConfigGuard {
    sdg_study_config* c;
    ~ConfigGuard() { sdg_study_config_destroy(c); }
  } config_guard{config};

  sdg_status st;
  if ((st = sdg_study_config_set_solution(config, opt.solution.c_str()))) return fail("config", st);
  if ((st = sdg_study_config_set_coefficient(config, opt.rho.c_str()))) return fail("config", st);
  if ((st = sdg_study_config_set_degree(config, opt.degree))) return fail("config", st);
  if ((st = sdg_study_config_set_meshes(config, opt.meshes.data(),
                                        static_cast<int>(opt.meshes.size()))))
    return fail("config", st);
  if ((st = sdg_study_config_set_tolerance(config, opt.tol))) return fail("config", st);
  if ((st = sdg_study_config_set_max_iterations(config, opt.max_iters))) return fail("config", st);
  if ((st = sdg_study_config_set_initial_guess(config, opt.init.c_str()))) return fail("config", st);
  if ((st = sdg_study_config_set_stop_norm(config, opt.stop_norm.c_str()))) return fail("config", st);
  if ((st = sdg_study_config_set_line_search(config, opt.line_search ? 1 : 0)))
    return fail("config", st);
  if ((st = sdg_study_config_set_seed(config, opt.seed))) return fail("config", st);
  if ((st = sdg_study_config_set_format(config, opt.format.c_str()))) return fail("config", st);
  if ((st = sdg_study_config_set_output_path(config, opt.out.c_str()))) return fail("config", st);

  sdg_study_report* report = nullptr;
  const sdg_status run_status = sdg_study_run(config, &report);
  if (run_status != SDG_OK && run_status != SDG_ERR_NO_CONVERGENCE) return fail("run", run_status);
  if (run_status == SDG_ERR_NO_CONVERGENCE)
    std::fprintf(stderr, "sdg: warning: %s\n", sdg_last_error());
  struct ReportGuard {
    sdg_study_report* r;
    ~ReportGuard() { sdg_study_report_destroy(r); }
  } report_guard{report};

  if (opt.out.empty()) {
    size_t needed = 0;
    if ((st = sdg_study_report_render(report, opt.format.c_str(), nullptr, 0, &needed)))
      return fail("render", st);
    std::string buffer(needed, '\0');
    if ((st = sdg_study_report_render(report, opt.format.c_str(), buffer.data(), buffer.size(),
                                      nullptr)))
      return fail("render", st);
    std::fputs(buffer.c_str(), stdout);
  } else {
    if ((st = sdg_study_report_emit(report, opt.format.c_str(), opt.out.c_str())))
      return fail("emit", st);
  }
  return run_status == SDG_ERR_NO_CONVERGENCE ? kExitNoConvergence : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staggered DG convergence studies for nonlinear elliptic problems"};
  app.require_subcommand(1);

  StudyOptions opt;
  CLI::App* study = app.add_subcommand("study", "Run a convergence study");
  study->add_option("--solution", opt.solution, "Manufactured solution id (u1|u2)");
  study->add_option("--rho", opt.rho, "Coefficient id (rho1..rho6)");
  study->add_option("--degree", opt.degree, "Polynomial degree k");
  study->add_option("--meshes", opt.meshes, "Comma-separated N values, strictly increasing")
      ->delimiter(',');
  study->add_option("--tol", opt.tol, "Newton tolerance on the successive error");
  study->add_option("--max-iters", opt.max_iters, "Newton iteration cap");
  study->add_option("--format", opt.format, "Output format (md|csv|json)");
  study->add_option("--out", opt.out, "Output path (stdout when omitted)");
  study->add_option("--init", opt.init, "Initial guess (linear|zero)");
  study->add_option("--stop-norm", opt.stop_norm, "Successive-error norm (l2|coeff)");
  study->add_flag("--line-search", opt.line_search, "Enable halving line search");
  study->add_option("--seed", opt.seed, "Seed echoed into reports");

  int mesh_n = 4;
  std::string mesh_rule = "centroid";
  std::string mesh_out = "mesh.txt";
  CLI::App* dump_mesh = app.add_subcommand("dump-mesh", "Write a staggered mesh as text");
  dump_mesh->add_option("--n", mesh_n, "Structured mesh parameter N");
  dump_mesh->add_option("--rule", mesh_rule, "Interior point rule (centroid|incenter)");
  dump_mesh->add_option("--out", mesh_out, "Output path")->required();

  int matrix_n = 4;
  int matrix_degree = 1;
  std::string matrix_name = "M";
  std::string matrix_out;
  CLI::App* dump_matrix =
      app.add_subcommand("dump-matrix", "Write an assembled operator in coordinate format");
  dump_matrix->add_option("--n", matrix_n, "Structured mesh parameter N");
  dump_matrix->add_option("--degree", matrix_degree, "Polynomial degree k");
  dump_matrix->add_option("--matrix", matrix_name, "Which operator (M|B|Bstar)");
  dump_matrix->add_option("--out", matrix_out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (study->parsed()) return run_study(opt);
  if (dump_mesh->parsed()) {
    const sdg_status st = sdg_mesh_dump(mesh_n, mesh_rule.c_str(), mesh_out.c_str());
    return st == SDG_OK ? kExitOk : fail("dump-mesh", st);
  }
  if (dump_matrix->parsed()) {
    const sdg_status st =
        sdg_matrix_dump(matrix_n, matrix_degree, matrix_name.c_str(), matrix_out.c_str());
    return st == SDG_OK ? kExitOk : fail("dump-matrix", st);
  }
  return kExitConfigError;
}
