#include "core/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "core/norms.hpp"
#include "core/postprocess.hpp"
#include "core/problems.hpp"

namespace sdg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

bool same_value(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

std::string initial_guess_name(InitialGuess g) {
  return g == InitialGuess::LinearizedSolve ? "linear" : "zero";
}

std::string stop_norm_name(StopNorm n) { return n == StopNorm::L2 ? "l2" : "coeff"; }

InitialGuess initial_guess_from(const std::string& s) {
  if (s == "linear") return InitialGuess::LinearizedSolve;
  if (s == "zero") return InitialGuess::Zero;
  throw std::invalid_argument("unknown initial guess '" + s + "' (expected linear|zero)");
}

StopNorm stop_norm_from(const std::string& s) {
  if (s == "l2") return StopNorm::L2;
  if (s == "coeff") return StopNorm::Coefficient;
  throw std::invalid_argument("unknown stop norm '" + s + "' (expected l2|coeff)");
}

}  // namespace

void StudyConfig::validate() const {
  make_problem(solution, coefficient);  // throws on unknown ids
  if (degree < 0) throw std::invalid_argument("study: degree must be >= 0");
  if (meshes.empty()) throw std::invalid_argument("study: mesh list is empty");
  for (size_t i = 0; i < meshes.size(); ++i) {
    if (meshes[i] < 1) throw std::invalid_argument("study: mesh sizes must be >= 1");
    if (i > 0 && meshes[i] <= meshes[i - 1])
      throw std::invalid_argument("study: mesh list must be strictly increasing");
  }
  if (format != "md" && format != "csv" && format != "json")
    throw std::invalid_argument("study: unknown format '" + format + "' (expected md|csv|json)");
  newton.validate();
}

bool StudyReport::all_converged() const {
  for (const auto& row : rows)
    if (!row.converged) return false;
  return true;
}

StudyReport run_study(const StudyConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();

  StudyReport report;
  report.config = config;

  const ProblemInstance problem =
      make_problem(config.solution, config.coefficient, config.newton.eps_reg);

  for (const int n : config.meshes) {
    const auto t_level = std::chrono::steady_clock::now();

    const InitialMesh initial = build_structured_initial(n);
    const StaggeredMesh mesh = subdivide(initial);
    const DofMap uh = build_dofmap_uh(mesh, config.degree);
    const DofMap wh = build_dofmap_wh(mesh, config.degree);
    const SdgSystem system = build_system(mesh, uh, wh, problem.forcing);

    const SdgSolution solution = newton_solve(system, problem.coefficient, config.newton);
    const PostprocessedSolution star =
        postprocess(mesh, uh, wh, solution.u_hat, solution.gradient_hat);

    StudyRow row;
    row.n = n;
    row.h = 1.0 / n;
    // tables use the nodal-interpolation error measure
    row.err_u = interpolation_error_scalar(mesh, uh, solution.u_hat, problem.solution.value);
    row.err_u_star = interpolation_error_postprocessed(mesh, star, problem.solution.value);
    row.order_u = kNaN;
    row.order_u_star = kNaN;
    row.iterations = solution.report.iterations;
    row.converged = solution.report.converged;
    report.rows.push_back(row);

    report.level_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_level).count());
  }

  for (size_t i = 1; i < report.rows.size(); ++i) {
    const double ratio = std::log(static_cast<double>(report.rows[i].n) / report.rows[i - 1].n);
    report.rows[i].order_u = std::log(report.rows[i - 1].err_u / report.rows[i].err_u) / ratio;
    report.rows[i].order_u_star =
        std::log(report.rows[i - 1].err_u_star / report.rows[i].err_u_star) / ratio;
  }

  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

std::string to_markdown(const StudyReport& report) {
  std::string out;
  out += "| Coefficient | Mesh size | L2 error u_h | order | L2 error u*_h | order | Newton iterations |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    out += "| " + report.config.coefficient + " | 1/" + std::to_string(row.n) + " | ";
    out += fmt("%.2e", row.err_u) + " | ";
    out += std::isnan(row.order_u) ? "-" : fmt("%.2f", row.order_u);
    out += " | " + fmt("%.2e", row.err_u_star) + " | ";
    out += std::isnan(row.order_u_star) ? "-" : fmt("%.2f", row.order_u_star);
    out += " | " + std::to_string(row.iterations);
    out += row.converged ? "" : " (not converged)";
    out += " |\n";
  }
  return out;
}

std::string to_csv(const StudyReport& report) {
  std::string out = "coefficient,solution,k,N,h,err_u,order_u,err_ustar,order_ustar,iters\n";
  for (const auto& row : report.rows) {
    out += report.config.coefficient + "," + report.config.solution + "," +
           std::to_string(report.config.degree) + "," + std::to_string(row.n) + ",";
    out += fmt("%.17g", row.h) + ",";
    out += fmt("%.17g", row.err_u) + ",";
    out += std::isnan(row.order_u) ? "" : fmt("%.17g", row.order_u);
    out += "," + fmt("%.17g", row.err_u_star) + ",";
    out += std::isnan(row.order_u_star) ? "" : fmt("%.17g", row.order_u_star);
    out += "," + std::to_string(row.iterations) + "\n";
  }
  return out;
}

std::string to_plot_data(const StudyReport& report) {
  std::string out = "# h err_u err_ustar\n";
  for (const auto& row : report.rows)
    out += fmt("%.17g", row.h) + " " + fmt("%.17g", row.err_u) + " " +
           fmt("%.17g", row.err_u_star) + "\n";
  return out;
}

namespace {

nlohmann::json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double double_or_nan(const nlohmann::json& j) {
  if (j.is_null()) return kNaN;
  return j.get<double>();
}

}  // namespace

std::string to_json(const StudyReport& report) {
  nlohmann::json j;
  j["config"] = {
      {"solution", report.config.solution},
      {"coefficient", report.config.coefficient},
      {"degree", report.config.degree},
      {"meshes", report.config.meshes},
      {"format", report.config.format},
      {"output_path", report.config.output_path},
      {"seed", report.config.seed},
      {"newton",
       {{"tolerance", report.config.newton.tolerance},
        {"max_iterations", report.config.newton.max_iterations},
        {"initial_guess", initial_guess_name(report.config.newton.initial_guess)},
        {"eps_reg", report.config.newton.eps_reg},
        {"stop_norm", stop_norm_name(report.config.newton.stop_norm)},
        {"line_search", report.config.newton.line_search}}},
  };
  j["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({{"N", row.n},
                         {"h", row.h},
                         {"err_u", row.err_u},
                         {"order_u", json_or_null(row.order_u)},
                         {"err_ustar", row.err_u_star},
                         {"order_ustar", json_or_null(row.order_u_star)},
                         {"iterations", row.iterations},
                         {"converged", row.converged}});
  }
  j["level_seconds"] = report.level_seconds;
  j["total_seconds"] = report.total_seconds;
  j["version"] = report.version;
  return j.dump(2) + "\n";
}

StudyReport report_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  StudyReport report;
  const auto& jc = j.at("config");
  report.config.solution = jc.at("solution").get<std::string>();
  report.config.coefficient = jc.at("coefficient").get<std::string>();
  report.config.degree = jc.at("degree").get<int>();
  report.config.meshes = jc.at("meshes").get<std::vector<int>>();
  report.config.format = jc.at("format").get<std::string>();
  report.config.output_path = jc.at("output_path").get<std::string>();
  report.config.seed = jc.at("seed").get<std::uint64_t>();
  const auto& jn = jc.at("newton");
  report.config.newton.tolerance = jn.at("tolerance").get<double>();
  report.config.newton.max_iterations = jn.at("max_iterations").get<int>();
  report.config.newton.initial_guess = initial_guess_from(jn.at("initial_guess").get<std::string>());
  report.config.newton.eps_reg = jn.at("eps_reg").get<double>();
  report.config.newton.stop_norm = stop_norm_from(jn.at("stop_norm").get<std::string>());
  report.config.newton.line_search = jn.at("line_search").get<bool>();
  for (const auto& jr : j.at("rows")) {
    StudyRow row;
    row.n = jr.at("N").get<int>();
    row.h = jr.at("h").get<double>();
    row.err_u = jr.at("err_u").get<double>();
    row.order_u = double_or_nan(jr.at("order_u"));
    row.err_u_star = jr.at("err_ustar").get<double>();
    row.order_u_star = double_or_nan(jr.at("order_ustar"));
    row.iterations = jr.at("iterations").get<int>();
    row.converged = jr.at("converged").get<bool>();
    report.rows.push_back(row);
  }
  report.level_seconds = j.at("level_seconds").get<std::vector<double>>();
  report.total_seconds = j.at("total_seconds").get<double>();
  report.version = j.at("version").get<std::string>();
  return report;
}

std::string newton_report_to_json(const NewtonReport& report) {
  nlohmann::json j;
  j["iterations"] = report.iterations;
  j["successive_errors"] = report.successive_errors;
  j["residual_norms"] = report.residual_norms;
  j["converged"] = report.converged;
  j["failure"] = report.failure;
  return j.dump(2) + "\n";
}

NewtonReport newton_report_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  NewtonReport report;
  report.iterations = j.at("iterations").get<int>();
  report.successive_errors = j.at("successive_errors").get<std::vector<double>>();
  report.residual_norms = j.at("residual_norms").get<std::vector<double>>();
  report.converged = j.at("converged").get<bool>();
  report.failure = j.at("failure").get<std::string>();
  return report;
}

std::string render(const StudyReport& report, const std::string& format) {
  if (format == "md") return to_markdown(report);
  if (format == "csv") return to_csv(report);
  if (format == "json") return to_json(report);
  throw std::invalid_argument("render: unknown format '" + format + "' (expected md|csv|json)");
}

void emit(const StudyReport& report, const std::string& format, const std::string& path) {
  const std::string body = render(report, format);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw std::runtime_error("emit: write failed for '" + path + "'");
  }
  const std::string plot_path = path + ".plot";
  std::ofstream plot(plot_path, std::ios::binary);
  if (!plot) throw std::runtime_error("emit: cannot open '" + plot_path + "' for writing");
  plot << to_plot_data(report);
  if (!plot) throw std::runtime_error("emit: write failed for '" + plot_path + "'");
}

bool operator==(const StudyConfig& a, const StudyConfig& b) {
  return a.solution == b.solution && a.coefficient == b.coefficient && a.degree == b.degree &&
         a.meshes == b.meshes && a.format == b.format && a.output_path == b.output_path &&
         a.seed == b.seed && a.newton.tolerance == b.newton.tolerance &&
         a.newton.max_iterations == b.newton.max_iterations &&
         a.newton.initial_guess == b.newton.initial_guess && a.newton.eps_reg == b.newton.eps_reg &&
         a.newton.stop_norm == b.newton.stop_norm && a.newton.line_search == b.newton.line_search;
}

bool operator==(const StudyRow& a, const StudyRow& b) {
  return a.n == b.n && a.h == b.h && a.err_u == b.err_u && same_value(a.order_u, b.order_u) &&
         a.err_u_star == b.err_u_star && same_value(a.order_u_star, b.order_u_star) &&
         a.iterations == b.iterations && a.converged == b.converged;
}

bool operator==(const StudyReport& a, const StudyReport& b) {
  return a.config == b.config && a.rows == b.rows && a.level_seconds == b.level_seconds &&
         a.total_seconds == b.total_seconds && a.version == b.version;
}

}  // namespace sdg
