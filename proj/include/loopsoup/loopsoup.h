/* C interface to the loop-soup library.
 *
 * Every function returning ls_status reports LS_OK on success. On failure the
 * output arguments are left untouched and ls_last_error() describes the
 * problem (the message is per thread and valid until the next failing call on
 * that thread). Vertices are 0-based here; matrices are row-major n*n arrays.
 */
#ifndef LOOPSOUP_H
#define LOOPSOUP_H

#include <stddef.h>
#include <stdint.h>

#if defined(LOOPSOUP_BUILDING)
#define LOOPSOUP_API __attribute__((visibility("default")))
#else
#define LOOPSOUP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ls_status {
  LS_OK = 0,
  LS_ERR_BAD_ARGUMENT = 1,
  LS_ERR_PARSE = 2,
  LS_ERR_NOT_INTEGRABLE = 3,
  LS_ERR_SINGULAR = 4,
  LS_ERR_BAD_SUBSET = 5,
  LS_ERR_TRIVIAL_LOOP = 6,
  LS_ERR_NOT_A_CURRENT = 7,
  LS_ERR_BUDGET = 8,
  LS_ERR_BAD_SEQUENCES = 9,
  LS_ERR_NOT_HERMITIAN_PD = 10,
  LS_ERR_NOT_SAMPLABLE = 11,
  LS_ERR_TOO_LARGE = 12,
  LS_ERR_NEGATIVE_POINT = 13,
  LS_ERR_INTERNAL = 14,
  LS_ERR_IO = 15
} ls_status;

typedef struct ls_weights ls_weights;
typedef struct ls_report ls_report;

LOOPSOUP_API const char* ls_status_name(ls_status status);
LOOPSOUP_API const char* ls_last_error(void);

/* Weight matrices. The JSON form is {"n": N, "q": [[entry, ...], ...]} with
 * entries [re, im], [re] or a bare number. */
LOOPSOUP_API ls_status ls_weights_parse(const char* json_text, ls_weights** out);
LOOPSOUP_API ls_status ls_weights_load(const char* path, ls_weights** out);
/* im may be NULL for a real matrix. */
LOOPSOUP_API ls_status ls_weights_create(int n, const double* re, const double* im,
                                         ls_weights** out);
LOOPSOUP_API void ls_weights_free(ls_weights* w);
LOOPSOUP_API int ls_weights_size(const ls_weights* w);
LOOPSOUP_API ls_status ls_weights_entry(const ls_weights* w, int u, int v, double* re,
                                        double* im);

LOOPSOUP_API ls_status ls_spectral_radius_abs(const ls_weights* w, double* out);
LOOPSOUP_API ls_status ls_is_integrable(const ls_weights* w, double margin, int* out);
LOOPSOUP_API ls_status ls_is_hermitian(const ls_weights* w, int* out);
LOOPSOUP_API ls_status ls_is_samplable(const ls_weights* w, int* out);
/* g_re / g_im receive n*n entries of (I - Q)^{-1}; either may be NULL. */
LOOPSOUP_API ls_status ls_green(const ls_weights* w, double* g_re, double* g_im, double* det_re,
                                double* det_im);

/* Current field. `counts` holds the n*n edge counts C_uv. */
LOOPSOUP_API ls_status ls_nu_c(const ls_weights* w, const int* counts, double* re, double* im);
LOOPSOUP_API ls_status ls_nu_c_oracle_bubble(const ls_weights* w, const int* counts, double* re,
                                             double* im);
LOOPSOUP_API ls_status ls_nu_c_oracle_loopsoup(const ls_weights* w, const int* counts,
                                               double* re, double* im);
LOOPSOUP_API ls_status ls_occupation_density(const ls_weights* w, const double* t,
                                             int max_total, double* re, double* im,
                                             double* tail_bound);
LOOPSOUP_API ls_status ls_density_abs_z2(const ls_weights* w, const double* t, int points,
                                         double* value, double* error);
LOOPSOUP_API ls_status ls_permanent(int n, const double* re, const double* im, double* out_re,
                                    double* out_im);

/* Reports carry a verdict plus JSON and text renderings of the same data. */
typedef struct ls_options {
  int max_mass;        /* currents enumerated by proposition / lemma (default 4) */
  int max_total;       /* series truncation (default 20) */
  int quad_points;     /* torus nodes per angle (default 64) */
  int max_length;      /* loop length for the Green series check (default 12) */
  size_t samples;      /* Monte Carlo sample count (default 100000) */
  uint64_t seed;       /* Monte Carlo seed */
  double tol;          /* <= 0 keeps each suite's own tolerance */
  const char* grid;    /* "0.5,1,2" or per coordinate "0.5,1;1,2"; NULL for default */
  int threads;         /* worker threads for sampling (default 1) */
} ls_options;

LOOPSOUP_API void ls_options_init(ls_options* opts);

LOOPSOUP_API ls_status ls_validate(const ls_weights* w, ls_report** out);
/* suite: proposition, lemma, identities, green, isomorphism, moments, torus,
 * montecarlo or all. w may be NULL for identities and torus. */
LOOPSOUP_API ls_status ls_verify(const ls_weights* w, const char* suite, const ls_options* opts,
                                 ls_report** out);
LOOPSOUP_API ls_status ls_current_report(const ls_weights* w, const int* counts,
                                         int with_oracles, ls_report** out);
LOOPSOUP_API ls_status ls_density_report(const ls_weights* w, const double* t,
                                         const ls_options* opts, ls_report** out);
/* Writes one record per sample to out_path (skipped when NULL). */
LOOPSOUP_API ls_status ls_sample(const ls_weights* w, const ls_options* opts,
                                 const char* out_path, ls_report** out);

LOOPSOUP_API int ls_report_passed(const ls_report* r);
LOOPSOUP_API const char* ls_report_json(const ls_report* r);
LOOPSOUP_API const char* ls_report_text(const ls_report* r);
LOOPSOUP_API void ls_report_free(ls_report* r);

#ifdef __cplusplus
}
#endif

#endif /* LOOPSOUP_H */
