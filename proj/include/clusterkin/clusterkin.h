/* Two-domain receptor clustering kinetics: C interface.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every function returns a ck_status; on failure a description is available
 * from ck_last_error_message() on the calling thread.
 */
#ifndef CLUSTERKIN_H
#define CLUSTERKIN_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(CLUSTERKIN_BUILDING)
#    define CK_API __declspec(dllexport)
#  else
#    define CK_API __declspec(dllimport)
#  endif
#else
#  define CK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ck_status {
  CK_OK = 0,
  CK_ERROR_NULL_POINTER = -1,
  CK_ERROR_INVALID_ARGUMENT = -2,
  CK_ERROR_SINGULAR = -3,
  CK_ERROR_NO_CONVERGENCE = -4,
  CK_ERROR_INTEGRATION = -5,
  CK_ERROR_IO = -6,
  CK_ERROR_INSUFFICIENT_BUFFER = -7,
  CK_ERROR_EXCEPTION = -99
} ck_status;

#define CK_SPECIES_COUNT 12
#define CK_FLUX_COUNT 20

typedef enum ck_solver {
  CK_SOLVER_AUTO = 0,
  CK_SOLVER_SEMIANALYTIC = 1,
  CK_SOLVER_NUMERIC = 2
} ck_solver;

typedef enum ck_path { CK_PATH_SEMIANALYTIC = 0, CK_PATH_NUMERIC = 1 } ck_path;

typedef struct ck_observables {
  double signal_total;
  double signal_hd;
  double signal_ld;
  double receptors_hd;
  double receptors_ld;
  double receptors_total;
} ck_observables;

typedef struct ck_params_s* ck_params;
typedef struct ck_steady_s* ck_steady;
typedef struct ck_sweep_s* ck_sweep;
typedef struct ck_sweep_result_s* ck_sweep_result;
typedef struct ck_report_s* ck_report;

CK_API const char* ck_version(void);
CK_API const char* ck_status_string(int status);
/* Message for the last failed call on this thread; "" if none. */
CK_API const char* ck_last_error_message(void);

/* Species are ordered R1 R2 RR1 RR2 VR1 VR2 VRR1 VRR2 RVR1 RVR2 D1 D2. */
CK_API const char* ck_species_name(size_t index);
CK_API const char* ck_flux_name(size_t index);

/* ---- parameters ------------------------------------------------------ */

/* scenario: "full", "reduced" or NULL (full). */
CK_API int ck_params_create(ck_params* out, const char* scenario);
CK_API int ck_params_clone(ck_params* out, ck_params src);
CK_API int ck_params_destroy(ck_params p);

/* Keys: alpha f v0 beta rtotal gamma_out acell_um2 r_cell_um and the rate
 * constants b d a c a_i c_i b_i d_i a_s. Settable values are validated
 * immediately; a rejected value leaves the handle unchanged. */
CK_API int ck_params_set(ck_params p, const char* key, double value);
/* Also readable: k1 k2 delta L0. */
CK_API int ck_params_get(ck_params p, const char* key, double* value);

/* ---- model ----------------------------------------------------------- */

/* Row-major 12 x 20 stoichiometry. */
CK_API int ck_network_gamma(int* out, size_t len);
CK_API int ck_flux_vector(ck_params p, const double* x, size_t nx, double* phi, size_t nphi);
CK_API int ck_rhs(ck_params p, const double* x, size_t nx, double* dxdt, size_t ndx);
CK_API int ck_observables_of(const double* x, size_t nx, ck_observables* out);

/* ---- steady state ---------------------------------------------------- */

CK_API int ck_solve_steady(ck_params p, int solver, ck_steady* out);
CK_API int ck_steady_destroy(ck_steady s);
CK_API int ck_steady_state(ck_steady s, double* x, size_t nx);
CK_API int ck_steady_observables(ck_steady s, ck_observables* out);
CK_API int ck_steady_residual(ck_steady s, double* residual_inf_norm);
CK_API int ck_steady_root_count(ck_steady s, int* count);
CK_API int ck_steady_path(ck_steady s, int* path);
/* Copies the fallback reason (possibly ""). *needed receives the size
 * including the terminator; returns CK_ERROR_INSUFFICIENT_BUFFER when
 * buf is too small. */
CK_API int ck_steady_fallback_reason(ck_steady s, char* buf, size_t len, size_t* needed);

/* ---- time courses ---------------------------------------------------- */

/* x0 may be NULL (all receptors as monomers, split f : 1 - f). path "-"
 * writes to stdout. */
CK_API int ck_timecourse_write_csv(ck_params p, const double* x0, size_t nx, double t_end,
                                   size_t samples, const char* path);

/* ---- sweeps ---------------------------------------------------------- */

CK_API int ck_sweep_create(ck_sweep* out);
CK_API int ck_sweep_destroy(ck_sweep s);
/* axis: "alpha", "f", "v0" or "beta". */
CK_API int ck_sweep_set_axis(ck_sweep s, const char* axis, const double* values, size_t n);
/* spec: comma-separated list or lo:hi[:n[:log]]. */
CK_API int ck_sweep_set_axis_text(ck_sweep s, const char* axis, const char* spec);
/* comma-separated scenario names. */
CK_API int ck_sweep_set_scenarios(ck_sweep s, const char* names);
/* keys: rtotal gamma_out acell_um2 verify jobs rel_tol abs_tol t_max */
CK_API int ck_sweep_set_option(ck_sweep s, const char* key, double value);
CK_API int ck_sweep_set_solver(ck_sweep s, int solver);
CK_API int ck_sweep_point_count(ck_sweep s, size_t* count);

CK_API int ck_sweep_run(ck_sweep s, ck_sweep_result* out);
CK_API int ck_sweep_result_destroy(ck_sweep_result r);
CK_API int ck_sweep_result_rows(ck_sweep_result r, size_t* rows);
/* Number of rows with a non-empty error column. */
CK_API int ck_sweep_result_failures(ck_sweep_result r, size_t* failures);
/* Numeric column by CSV header name (e.g. "alpha", "D1", "signal_total"). */
CK_API int ck_sweep_result_get(ck_sweep_result r, size_t row, const char* column, double* value);
CK_API int ck_sweep_result_write_csv(ck_sweep_result r, const char* path);

/* ---- self-check ------------------------------------------------------ */

CK_API int ck_validate(unsigned jobs, ck_report* out);
CK_API int ck_report_destroy(ck_report r);
CK_API int ck_report_count(ck_report r, size_t* count);
/* name/detail pointers stay valid until the report is destroyed. */
CK_API int ck_report_check(ck_report r, size_t index, const char** name, int* passed,
                           const char** detail);

#ifdef __cplusplus
}
#endif

#endif /* CLUSTERKIN_H */
