#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/newton.hpp"

namespace sdg {

inline constexpr const char* kVersion = "0.1.0";

/// Configuration of one convergence study: a (solution, coefficient) pair
/// solved on a sequence of structured meshes.
struct StudyConfig {
  std::string solution = "u1";
  std::string coefficient = "rho1";
  int degree = 1;
  std::vector<int> meshes = {4, 8, 16, 32, 64};  // strictly increasing N values
  NewtonConfig newton;
  std::string format = "md";  // md | csv | json
  std::string output_path;    // empty: render to stdout, no plot file
  std::uint64_t seed = 0;     // reserved for randomized diagnostic modes

  void validate() const;
};

struct StudyRow {
  int n = 0;
  double h = 0;  // 1/N
  double err_u = 0;
  double order_u = 0;  // NaN on the first row
  double err_u_star = 0;
  double order_u_star = 0;  // NaN on the first row
  int iterations = 0;
  bool converged = false;
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyRow> rows;
  std::vector<double> level_seconds;
  double total_seconds = 0;
  std::string version = kVersion;

  bool all_converged() const;
};

/// Solves every mesh level and fills in errors, observed orders and Newton
/// iteration counts. Non-convergence of a level is recorded in its row and
/// does not stop the remaining levels.
StudyReport run_study(const StudyConfig& config);

std::string to_markdown(const StudyReport& report);
std::string to_csv(const StudyReport& report);
std::string to_json(const StudyReport& report);
StudyReport report_from_json(const std::string& json_text);

/// Solver report with its full iteration histories.
std::string newton_report_to_json(const NewtonReport& report);
NewtonReport newton_report_from_json(const std::string& json_text);

/// (h, error) pairs for external plotting.
std::string to_plot_data(const StudyReport& report);

std::string render(const StudyReport& report, const std::string& format);

/// Writes the rendered report to `path` and the plot data alongside it
/// (path + ".plot"). Throws std::runtime_error with the path on I/O failure.
void emit(const StudyReport& report, const std::string& format, const std::string& path);

bool operator==(const StudyConfig& a, const StudyConfig& b);
bool operator==(const StudyRow& a, const StudyRow& b);
bool operator==(const StudyReport& a, const StudyReport& b);

}  // namespace sdg
