#include "sdg/sdg.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/assembly.hpp"
#include "core/newton.hpp"
#include "core/staggered_mesh.hpp"
#include "core/study.hpp"

struct sdg_study_config {
  sdg::StudyConfig config;
};

struct sdg_study_report {
  sdg::StudyReport report;
};

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& message) { t_last_error = message; }

template <typename Fn>
sdg_status guarded(Fn&& fn) {
  try {
    t_last_error.clear();
    return fn();
  } catch (const std::invalid_argument& err) {
    set_error(err.what());
    return SDG_ERR_INVALID_ARGUMENT;
  } catch (const sdg::SingularJacobianError& err) {
    set_error(err.what());
    return SDG_ERR_SINGULAR;
  } catch (const std::ios_base::failure& err) {
    set_error(err.what());
    return SDG_ERR_IO;
  } catch (const std::runtime_error& err) {
    // I/O paths raise runtime_error with the path in the message
    set_error(err.what());
    return std::string(err.what()).find("cannot open") != std::string::npos ||
                   std::string(err.what()).find("write failed") != std::string::npos
               ? SDG_ERR_IO
               : SDG_ERR_NUMERIC;
  } catch (const std::exception& err) {
    set_error(err.what());
    return SDG_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return SDG_ERR_INTERNAL;
  }
}

sdg_status require(bool condition, const char* message) {
  if (condition) return SDG_OK;
  set_error(message);
  return SDG_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* sdg_version(void) { return sdg::kVersion; }

const char* sdg_last_error(void) { return t_last_error.c_str(); }

sdg_study_config* sdg_study_config_create(void) {
  try {
    return new sdg_study_config{};
  } catch (...) {
    return nullptr;
  }
}

void sdg_study_config_destroy(sdg_study_config* config) { delete config; }

sdg_status sdg_study_config_set_solution(sdg_study_config* config, const char* id) {
  if (auto st = require(config && id, "null argument")) return st;
  return guarded([&] {
    sdg::make_solution(id);  // validates
    config->config.solution = id;
    return SDG_OK;
  });
}

sdg_status sdg_study_config_set_coefficient(sdg_study_config* config, const char* id) {
  if (auto st = require(config && id, "null argument")) return st;
  return guarded([&] {
    sdg::make_coefficient(id);  // validates
    config->config.coefficient = id;
    return SDG_OK;
  });
}

sdg_status sdg_study_config_set_degree(sdg_study_config* config, int degree) {
  if (auto st = require(config != nullptr, "null config")) return st;
  if (auto st = require(degree >= 0, "degree must be >= 0")) return st;
  config->config.degree = degree;
  return SDG_OK;
}

sdg_status sdg_study_config_set_meshes(sdg_study_config* config, const int* n_values, int count) {
  if (auto st = require(config && n_values, "null argument")) return st;
  if (auto st = require(count >= 1, "mesh list is empty")) return st;
  for (int i = 0; i < count; ++i) {
    if (auto st = require(n_values[i] >= 1, "mesh sizes must be >= 1")) return st;
    if (i > 0)
      if (auto st = require(n_values[i] > n_values[i - 1], "mesh list must be strictly increasing"))
        return st;
  }
  config->config.meshes.assign(n_values, n_values + count);
  return SDG_OK;
}

sdg_status sdg_study_config_set_tolerance(sdg_study_config* config, double tolerance) {
  if (auto st = require(config != nullptr, "null config")) return st;
  if (auto st = require(tolerance > 0, "tolerance must be positive")) return st;
  config->config.newton.tolerance = tolerance;
  return SDG_OK;
}

sdg_status sdg_study_config_set_max_iterations(sdg_study_config* config, int count) {
  if (auto st = require(config != nullptr, "null config")) return st;
  if (auto st = require(count >= 1, "max_iterations must be >= 1")) return st;
  config->config.newton.max_iterations = count;
  return SDG_OK;
}

sdg_status sdg_study_config_set_initial_guess(sdg_study_config* config, const char* name) {
  if (auto st = require(config && name, "null argument")) return st;
  const std::string s(name);
  if (auto st = require(s == "linear" || s == "zero", "initial guess must be linear|zero")) return st;
  config->config.newton.initial_guess =
      s == "linear" ? sdg::InitialGuess::LinearizedSolve : sdg::InitialGuess::Zero;
  return SDG_OK;
}

sdg_status sdg_study_config_set_stop_norm(sdg_study_config* config, const char* name) {
  if (auto st = require(config && name, "null argument")) return st;
  const std::string s(name);
  if (auto st = require(s == "l2" || s == "coeff", "stop norm must be l2|coeff")) return st;
  config->config.newton.stop_norm = s == "l2" ? sdg::StopNorm::L2 : sdg::StopNorm::Coefficient;
  return SDG_OK;
}

sdg_status sdg_study_config_set_format(sdg_study_config* config, const char* format) {
  if (auto st = require(config && format, "null argument")) return st;
  const std::string s(format);
  if (auto st = require(s == "md" || s == "csv" || s == "json", "format must be md|csv|json"))
    return st;
  config->config.format = s;
  return SDG_OK;
}

sdg_status sdg_study_config_set_output_path(sdg_study_config* config, const char* path) {
  if (auto st = require(config && path, "null argument")) return st;
  config->config.output_path = path;
  return SDG_OK;
}

sdg_status sdg_study_config_set_line_search(sdg_study_config* config, int enabled) {
  if (auto st = require(config != nullptr, "null config")) return st;
  config->config.newton.line_search = enabled != 0;
  return SDG_OK;
}

sdg_status sdg_study_config_set_seed(sdg_study_config* config, unsigned long long seed) {
  if (auto st = require(config != nullptr, "null config")) return st;
  config->config.seed = seed;
  return SDG_OK;
}

sdg_status sdg_study_run(const sdg_study_config* config, sdg_study_report** report) {
  if (auto st = require(config && report, "null argument")) return st;
  *report = nullptr;
  return guarded([&]() -> sdg_status {
    sdg::StudyReport result = sdg::run_study(config->config);
    const bool converged = result.all_converged();
    *report = new sdg_study_report{std::move(result)};
    if (!converged) {
      set_error("one or more mesh levels did not converge");
      return SDG_ERR_NO_CONVERGENCE;
    }
    return SDG_OK;
  });
}

void sdg_study_report_destroy(sdg_study_report* report) { delete report; }

int sdg_study_report_num_levels(const sdg_study_report* report) {
  return report ? static_cast<int>(report->report.rows.size()) : 0;
}

sdg_status sdg_study_report_row(const sdg_study_report* report, int level, int* n, double* h,
                                double* err_u, double* order_u, double* err_ustar,
                                double* order_ustar, int* iterations, int* converged) {
  if (auto st = require(report != nullptr, "null report")) return st;
  if (auto st = require(level >= 0 && level < sdg_study_report_num_levels(report),
                        "level out of range"))
    return st;
  const sdg::StudyRow& row = report->report.rows[level];
  if (n) *n = row.n;
  if (h) *h = row.h;
  if (err_u) *err_u = row.err_u;
  if (order_u) *order_u = row.order_u;
  if (err_ustar) *err_ustar = row.err_u_star;
  if (order_ustar) *order_ustar = row.order_u_star;
  if (iterations) *iterations = row.iterations;
  if (converged) *converged = row.converged ? 1 : 0;
  return SDG_OK;
}

sdg_status sdg_study_report_render(const sdg_study_report* report, const char* format,
                                   char* buffer, size_t buffer_size, size_t* needed) {
  if (auto st = require(report && format, "null argument")) return st;
  return guarded([&] {
    const std::string body = sdg::render(report->report, format);
    if (needed) *needed = body.size() + 1;
    if (buffer && buffer_size > 0) {
      const size_t n = std::min(buffer_size - 1, body.size());
      std::memcpy(buffer, body.data(), n);
      buffer[n] = '\0';
    }
    return SDG_OK;
  });
}

sdg_status sdg_study_report_emit(const sdg_study_report* report, const char* format,
                                 const char* path) {
  if (auto st = require(report && format && path, "null argument")) return st;
  return guarded([&] {
    sdg::emit(report->report, format, path);
    return SDG_OK;
  });
}

sdg_status sdg_mesh_dump(int n, const char* rule, const char* path) {
  if (auto st = require(rule && path, "null argument")) return st;
  return guarded([&]() -> sdg_status {
    const std::string rule_name(rule);
    sdg::InteriorPointRule point_rule;
    if (rule_name == "centroid")
      point_rule = sdg::centroid_point;
    else if (rule_name == "incenter")
      point_rule = sdg::incenter_point;
    else
      throw std::invalid_argument("unknown interior point rule '" + rule_name +
                                  "' (expected centroid|incenter)");
    const sdg::StaggeredMesh mesh = sdg::subdivide(sdg::build_structured_initial(n), point_rule);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + std::string(path) + "' for writing");
    sdg::dump_mesh(mesh, out);
    if (!out) throw std::runtime_error("write failed for '" + std::string(path) + "'");
    return SDG_OK;
  });
}

sdg_status sdg_matrix_dump(int n, int degree, const char* matrix, const char* path) {
  if (auto st = require(matrix && path, "null argument")) return st;
  return guarded([&]() -> sdg_status {
    const std::string which(matrix);
    if (which != "M" && which != "B" && which != "Bstar")
      throw std::invalid_argument("unknown matrix '" + which + "' (expected M|B|Bstar)");
    const sdg::StaggeredMesh mesh = sdg::subdivide(sdg::build_structured_initial(n));
    const sdg::DofMap uh = sdg::build_dofmap_uh(mesh, degree);
    const sdg::DofMap wh = sdg::build_dofmap_wh(mesh, degree);
    sdg::SparseMat mat;
    if (which == "M")
      mat = sdg::assemble_mass(mesh, wh);
    else if (which == "B")
      mat = sdg::assemble_b(mesh, uh, wh);
    else
      mat = sdg::assemble_b_star(mesh, uh, wh);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + std::string(path) + "' for writing");
    sdg::dump_matrix_coo(mat, out);
    if (!out) throw std::runtime_error("write failed for '" + std::string(path) + "'");
    return SDG_OK;
  });
}

}  // extern "C"
