/* virodyn — distributed-delay viral infection model with CTL immune response.
 *
 * C interface to the solver library: scenario loading, equilibrium and
 * reproduction-number analysis, DDE integration with dense output, and
 * Lyapunov decrease audits.  All heap objects are opaque handles owned by
 * the library; every vd_*_free accepts NULL.
 *
 * Thread safety: distinct handles may be used from distinct threads without
 * synchronization.  A single handle must not be mutated concurrently.
 * vd_last_error() is thread-local.
 */
#ifndef VIRODYN_H
#define VIRODYN_H

#include <stddef.h>

#if defined(_WIN32)
#define VD_API __declspec(dllexport)
#else
#define VD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vd_status {
  VD_OK = 0,
  VD_ERR_CONFIG = 1,   /* malformed scenario or failed hypothesis validation */
  VD_ERR_NUMERIC = 2,  /* bracket failure, divergence, positivity breach */
  VD_ERR_DOMAIN = 3,   /* argument outside a function's mathematical domain */
  VD_ERR_INSUFFICIENT_HISTORY = 4, /* lagged lookup before the history's domain */
  VD_ERR_IO = 5,
  VD_ERR_INVALID_ARGUMENT = 6
} vd_status;

typedef enum vd_regime {
  VD_REGIME_INFECTION_FREE = 0, /* R0 <= 1: only E0 */
  VD_REGIME_CTL_INACTIVATED = 1, /* R1 <= 1 < R0: E0 and E1 */
  VD_REGIME_CTL_ACTIVATED = 2   /* R1 > 1: E0, E1 and E2 */
} vd_regime;

typedef enum vd_equilibrium_id { VD_E0 = 0, VD_E1 = 1, VD_E2 = 2 } vd_equilibrium_id;

typedef struct vd_scenario vd_scenario;
typedef struct vd_report vd_report;
typedef struct vd_trajectory vd_trajectory;
typedef struct vd_audit vd_audit;

VD_API const char *vd_version(void);

/* Message describing the most recent failing call on the calling thread.
 * Valid until the next failing call on the same thread. */
VD_API const char *vd_last_error(void);

/* Frees strings returned through char** out-parameters. */
VD_API void vd_string_free(char *s);

/* ---- scenarios ------------------------------------------------------- */

VD_API vd_status vd_scenario_load(const char *path, vd_scenario **out);
VD_API vd_status vd_scenario_parse(const char *text, vd_scenario **out);
VD_API vd_status vd_scenario_clone(const vd_scenario *sc, vd_scenario **out);
VD_API void vd_scenario_free(vd_scenario *sc);

/* Numeric overrides addressed as "section.key", e.g. "incidence.beta",
 * "run.t_end", "run.h", "params.a". */
VD_API vd_status vd_scenario_set(vd_scenario *sc, const char *key, double value);
VD_API vd_status vd_scenario_get(const vd_scenario *sc, const char *key, double *out);

/* Checks hypotheses H1-H2 and incidence conditions i)-iii) on sampling
 * grids.  *pass is 1/0; *report (optional) receives the per-hypothesis
 * listing.  Returns VD_OK even when the hypotheses fail. */
VD_API vd_status vd_scenario_validate(const vd_scenario *sc, int *pass, char **report);

/* Configured output file name from the [outputs] section; `which` is "csv",
 * "plot" or "report".  *out receives NULL when the name is unset. */
VD_API vd_status vd_scenario_output(const vd_scenario *sc, const char *which, char **out);

/* CSV row thinning configured in [outputs] stride (1 when unset). */
VD_API int vd_scenario_stride(const vd_scenario *sc);

/* Sweep description from the scenario's [sweep] section. */
VD_API size_t vd_scenario_sweep_count(const vd_scenario *sc);
VD_API vd_status vd_scenario_sweep_param(const vd_scenario *sc, char **name);
VD_API vd_status vd_scenario_sweep_value(const vd_scenario *sc, size_t i, double *out);

/* ---- equilibria ------------------------------------------------------ */

VD_API vd_status vd_equilibria(const vd_scenario *sc, vd_report **out);
VD_API void vd_report_free(vd_report *r);

/* Scalar fields: "xbar", "g1", "g2", "g3", "r0", "r1", "rctl".
 * "rctl" fails with VD_ERR_INVALID_ARGUMENT when E1 is absent. */
VD_API vd_status vd_report_value(const vd_report *r, const char *field, double *out);
VD_API vd_regime vd_report_regime(const vd_report *r);

/* Returns 1 and fills state[4] = (x, y, v, z) when the equilibrium exists,
 * 0 otherwise.  E0 always exists. */
VD_API int vd_report_equilibrium(const vd_report *r, vd_equilibrium_id which, double state[4]);
VD_API vd_status vd_report_text(const vd_report *r, char **out);

/* ---- simulation ------------------------------------------------------ */

/* Integrates the scenario (method of steps, fixed-step RK4 with cubic
 * Hermite dense output).  The step comes from run.h when given, otherwise
 * from the stability-aware default policy; runs aborting on a positivity
 * breach are retried at half the step. */
VD_API vd_status vd_simulate(const vd_scenario *sc, vd_trajectory **out);
VD_API void vd_trajectory_free(vd_trajectory *t);

VD_API size_t vd_trajectory_size(const vd_trajectory *t);
VD_API double vd_trajectory_step(const vd_trajectory *t);
VD_API vd_status vd_trajectory_node(const vd_trajectory *t, size_t i, double *time, double state[4]);

/* Dense evaluation; times before the initial instant fall through to the
 * scenario history. */
VD_API vd_status vd_trajectory_eval(const vd_trajectory *t, double time, double state[4]);

/* Writes "t,x,y,v,z" with one full-precision row per grid point. */
VD_API vd_status vd_trajectory_write_csv(const vd_trajectory *t, const char *path);

/* As above but keeping every stride-th row (plus the final one). */
VD_API vd_status vd_trajectory_write_csv_strided(const vd_trajectory *t, const char *path,
                                                 int stride);

/* Positivity / invariant-region monitor (eventual bounding box).
 * *eventually_bounded is 1 when every component sits below its bound over
 * the final fifth of the time span. */
VD_API vd_status vd_monitor(const vd_scenario *sc, const vd_trajectory *t,
                            int *eventually_bounded, char **report);

/* ---- Lyapunov audit --------------------------------------------------- */

/* Evaluates the Lyapunov functional matching `target` along the trajectory
 * and audits decrease plus convergence to the target equilibrium. */
VD_API vd_status vd_verify(const vd_scenario *sc, const vd_trajectory *t,
                           vd_equilibrium_id target, vd_audit **out);
VD_API void vd_audit_free(vd_audit *aud);

VD_API int vd_audit_pass(const vd_audit *aud);
VD_API int vd_audit_decrease_ok(const vd_audit *aud);
VD_API int vd_audit_converged(const vd_audit *aud);

/* Scalar fields: "max_increase", "rel_increase", "initial_value",
 * "final_value", "final_distance", "decrease_tol", "convergence_tol". */
VD_API vd_status vd_audit_value(const vd_audit *aud, const char *field, double *out);
VD_API size_t vd_audit_samples(const vd_audit *aud);
VD_API vd_status vd_audit_sample(const vd_audit *aud, size_t i, double *time, double *value);
VD_API vd_status vd_audit_text(const vd_audit *aud, char **out);

#ifdef __cplusplus
}
#endif

#endif /* VIRODYN_H */
