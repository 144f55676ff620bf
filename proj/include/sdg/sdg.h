/* Staggered discontinuous Galerkin solver for nonlinear elliptic problems
 * on the unit square: C API of the shared library.
 *
 * All functions returning sdg_status leave a human-readable message for the
 * calling thread retrievable via sdg_last_error() when they fail. Objects
 * are opaque; create/destroy pairs own them.
 */
#ifndef SDG_H
#define SDG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SDG_API __declspec(dllexport)
#else
#define SDG_API __attribute__((visibility("default")))
#endif

typedef enum sdg_status {
  SDG_OK = 0,
  SDG_ERR_INVALID_ARGUMENT = 1,
  SDG_ERR_NO_CONVERGENCE = 2,
  SDG_ERR_SINGULAR = 3,
  SDG_ERR_NUMERIC = 4,
  SDG_ERR_IO = 5,
  SDG_ERR_INTERNAL = 6
} sdg_status;

typedef struct sdg_study_config sdg_study_config;
typedef struct sdg_study_report sdg_study_report;

SDG_API const char* sdg_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
SDG_API const char* sdg_last_error(void);

/* ---- study configuration ---------------------------------------------- */

/* Defaults: u1, rho1, degree 1, meshes 4..64, tol 1e-10, max 100 iterations,
 * linear initial guess, L2 stop norm. Returns NULL only on allocation
 * failure. */
SDG_API sdg_study_config* sdg_study_config_create(void);
SDG_API void sdg_study_config_destroy(sdg_study_config* config);

SDG_API sdg_status sdg_study_config_set_solution(sdg_study_config* config, const char* id);
SDG_API sdg_status sdg_study_config_set_coefficient(sdg_study_config* config, const char* id);
SDG_API sdg_status sdg_study_config_set_degree(sdg_study_config* config, int degree);
SDG_API sdg_status sdg_study_config_set_meshes(sdg_study_config* config, const int* n_values,
                                               int count);
SDG_API sdg_status sdg_study_config_set_tolerance(sdg_study_config* config, double tolerance);
SDG_API sdg_status sdg_study_config_set_max_iterations(sdg_study_config* config, int count);
/* "linear" (solve with rho frozen at rho(0)) or "zero". */
SDG_API sdg_status sdg_study_config_set_initial_guess(sdg_study_config* config, const char* name);
/* "l2" (L2 norm of the iterate difference) or "coeff" (Euclidean). */
SDG_API sdg_status sdg_study_config_set_stop_norm(sdg_study_config* config, const char* name);
/* "md", "csv" or "json"; echoed in reports and used as the emit default. */
SDG_API sdg_status sdg_study_config_set_format(sdg_study_config* config, const char* format);
SDG_API sdg_status sdg_study_config_set_output_path(sdg_study_config* config, const char* path);
SDG_API sdg_status sdg_study_config_set_line_search(sdg_study_config* config, int enabled);
SDG_API sdg_status sdg_study_config_set_seed(sdg_study_config* config,
                                             unsigned long long seed);

/* ---- running and reports ----------------------------------------------- */

/* Runs the convergence study. On SDG_ERR_NO_CONVERGENCE a partial report is
 * still produced; other errors leave *report NULL. The caller owns the
 * report. */
SDG_API sdg_status sdg_study_run(const sdg_study_config* config, sdg_study_report** report);

SDG_API void sdg_study_report_destroy(sdg_study_report* report);

SDG_API int sdg_study_report_num_levels(const sdg_study_report* report);

/* Any output pointer may be NULL. Orders are NaN on the first level. */
SDG_API sdg_status sdg_study_report_row(const sdg_study_report* report, int level, int* n,
                                        double* h, double* err_u, double* order_u,
                                        double* err_ustar, double* order_ustar, int* iterations,
                                        int* converged);

/* Renders "md", "csv" or "json" into the caller's buffer. *needed receives
 * the full length including the terminating NUL; the buffer is filled (and
 * truncated) whenever it is non-NULL. */
SDG_API sdg_status sdg_study_report_render(const sdg_study_report* report, const char* format,
                                           char* buffer, size_t buffer_size, size_t* needed);

/* Writes the rendered report to `path` and plot data to `path + ".plot"`. */
SDG_API sdg_status sdg_study_report_emit(const sdg_study_report* report, const char* format,
                                         const char* path);

/* ---- debugging dumps ---------------------------------------------------- */

/* Text dump of the staggered mesh for the structured N x N family
 * (`v x y`, `t i j k macro`, `e i j kind` lines). rule: "centroid" or
 * "incenter". */
SDG_API sdg_status sdg_mesh_dump(int n, const char* rule, const char* path);

/* Coordinate-format dump (`i j value` lines) of an assembled operator on
 * the structured N x N mesh: matrix is "M", "B" or "Bstar". */
SDG_API sdg_status sdg_matrix_dump(int n, int degree, const char* matrix, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SDG_H */
