/* Copyright specradius contributors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the specradius library: worst-case structured perturbations,
 * structured pseudospectral abscissae, and structured stability radii of
 * linear systems dx/dt = A x under sparse, entry-bounded, energy-limited
 * additive perturbations.
 *
 * All objects are opaque handles created by sr_* constructors and released
 * with the matching sr_*_free. Every fallible call returns sr_status; on
 * failure sr_last_error() holds a message for the calling thread. Matrix
 * entries use 1-based (i, j) indices in this interface, matching the on-disk
 * formats.
 */

#ifndef SPECRADIUS_H
#define SPECRADIUS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
  SR_OK = 0,
  SR_ERR_INVALID_ARGUMENT,
  SR_ERR_SHAPE_MISMATCH,
  SR_ERR_EIGEN_FAILURE,
  SR_ERR_ILL_CONDITIONED_EIGENPAIR,
  SR_ERR_INVALID_STRUCTURE,
  SR_ERR_DEGENERATE_OBJECTIVE,
  SR_ERR_INFEASIBLE_ENERGY,
  SR_ERR_FULLY_SATURATED,
  SR_ERR_TOO_LARGE,
  SR_ERR_SINGULAR_SHIFT,
  SR_ERR_MAX_ITERATIONS,
  SR_ERR_EMPTY_CLOUD,
  SR_ERR_PARSE,
  SR_ERR_UNSUPPORTED_FIELD,
  SR_ERR_IO,
  SR_ERR_INTERNAL
} sr_status;

const char* sr_status_name(sr_status status);

/* Message for the most recent failure on this thread. */
const char* sr_last_error(void);

const char* sr_version(void);

/* ---------------------------------------------------------------- matrices */

typedef struct sr_matrix sr_matrix;

sr_status sr_matrix_from_data(int rows, int cols, const double* row_major, sr_matrix** out);
sr_status sr_matrix_from_matrix_market(const char* path, sr_matrix** out);
/* Companion form of x^n + a_1 x^(n-1) + ... + a_n. */
sr_status sr_matrix_companion(const double* coeffs, int n, sr_matrix** out);
/* Circulant band matrix with wrap-around super/sub diagonals. */
sr_status sr_matrix_circulant(int n, double diag, double sup, double sub, sr_matrix** out);
/* Coordinate real general layout; path "-" writes to stdout. */
sr_status sr_matrix_write_matrix_market(const sr_matrix* m, const char* path);
int sr_matrix_rows(const sr_matrix* m);
int sr_matrix_cols(const sr_matrix* m);
double sr_matrix_get(const sr_matrix* m, int i, int j); /* 1-based */
void sr_matrix_free(sr_matrix* m);

/* -------------------------------------------------------------- structures */

typedef struct sr_structure sr_structure;

sr_status sr_structure_from_json_file(const char* path, sr_structure** out);
sr_status sr_structure_from_json(const char* text, sr_structure** out);
int sr_structure_dim(const sr_structure* s);
int sr_structure_edge_count(const sr_structure* s);
void sr_structure_free(sr_structure* s);

/* ----------------------------------------------------------------- options */

typedef enum sr_init_policy {
  SR_INIT_ZERO = 0,   /* start from the zero perturbation */
  SR_INIT_FRESH = 1,  /* one random feasible start per solve */
  SR_INIT_WARM = 2,   /* project the previous solution onto the new set */
  SR_INIT_BEST = 3    /* zero plus `restarts` random starts, keep the max */
} sr_init_policy;

typedef struct sr_abscissa_options {
  double tie_tol;        /* rightmost-eigenvalue tie tolerance (default 1e-8) */
  double tol_delta;      /* stopping tolerance on the update norm (default 1e-3) */
  int max_iters;         /* fixed-point iteration cap (default 1000) */
  int frobenius_stop;    /* nonzero: stop on the Frobenius update norm */
  sr_init_policy policy; /* default SR_INIT_BEST */
  int restarts;          /* random starts for SR_INIT_BEST (default 10) */
  uint64_t seed;         /* base seed for random starts (default 0) */
} sr_abscissa_options;

void sr_abscissa_options_init(sr_abscissa_options* opts);

typedef struct sr_radius_options {
  sr_abscissa_options abscissa;
  double eps0;      /* initial energy (default 1) */
  double tol_alpha; /* stopping tolerance on |alpha| (default 1e-3) */
  double zeta;      /* step floor factor in (0,1) (default 0.1) */
  int max_iters;    /* Newton iteration cap (default 100) */
} sr_radius_options;

void sr_radius_options_init(sr_radius_options* opts);

/* ----------------------------------------------------------------- results */

typedef struct sr_abscissa_result sr_abscissa_result;
typedef struct sr_radius_result sr_radius_result;
typedef struct sr_sweep_result sr_sweep_result;
typedef struct sr_cloud sr_cloud;

/* Worst-case perturbation of energy at most epsilon. */
sr_status sr_worst_case(const sr_matrix* a, const sr_structure* s, double epsilon,
                        const sr_abscissa_options* opts, sr_abscissa_result** out);

double sr_abscissa_alpha(const sr_abscissa_result* r);
/* Returns 0 and writes theta when defined; returns -1 when absent. */
int sr_abscissa_theta(const sr_abscissa_result* r, double* theta);
int sr_abscissa_converged(const sr_abscissa_result* r);
int sr_abscissa_iterations(const sr_abscissa_result* r);
void sr_abscissa_lambda(const sr_abscissa_result* r, double* re, double* im);
int sr_abscissa_delta_count(const sr_abscissa_result* r);
void sr_abscissa_delta_entry(const sr_abscissa_result* r, int k, int* i, int* j, double* value);
/* Convergence-rate diagnostic at the result's eigentriple; ell > 0. */
sr_status sr_convergence_rate(const sr_matrix* a, const sr_abscissa_result* r, double epsilon,
                              double ell, double* out);
/* JSON document; pass r_over_ell or NULL when unavailable. Path "-" = stdout. */
sr_status sr_abscissa_write_json(const sr_abscissa_result* r, const double* r_over_ell,
                                 const char* path);
void sr_abscissa_result_free(sr_abscissa_result* r);

/* Structured stability radius. */
sr_status sr_stability_radius(const sr_matrix* a, const sr_structure* s,
                              const sr_radius_options* opts, sr_radius_result** out);

double sr_radius_value(const sr_radius_result* r);
int sr_radius_converged(const sr_radius_result* r);
int sr_radius_iterations(const sr_radius_result* r);
int sr_radius_restarts_used(const sr_radius_result* r);
void sr_radius_trace_entry(const sr_radius_result* r, int l, double* epsilon, double* alpha);
double sr_radius_final_alpha(const sr_radius_result* r);
int sr_radius_delta_count(const sr_radius_result* r);
void sr_radius_delta_entry(const sr_radius_result* r, int k, int* i, int* j, double* value);
sr_status sr_radius_convergence_rate(const sr_matrix* a, const sr_radius_result* r, double ell,
                                     double* out);
sr_status sr_radius_write_json(const sr_radius_result* r, const double* r_over_ell,
                               const char* path);
void sr_radius_result_free(sr_radius_result* r);

/* Abscissa curve over [eps_min, eps_max] with the given step. */
sr_status sr_sweep(const sr_matrix* a, const sr_structure* s, double eps_min, double eps_max,
                   double eps_step, const sr_abscissa_options* opts, sr_sweep_result** out);
int sr_sweep_count(const sr_sweep_result* r);
/* Returns 0 on a solved point; -1 when the point failed (alpha unset). */
int sr_sweep_entry(const sr_sweep_result* r, int k, double* epsilon, double* alpha);
sr_status sr_sweep_write_csv(const sr_sweep_result* r, const char* path);
void sr_sweep_result_free(sr_sweep_result* r);

/* Monte-Carlo spectrum estimate over n_samples feasible perturbations. */
sr_status sr_sample_pseudospectrum(const sr_matrix* a, const sr_structure* s, double epsilon,
                                   int n_samples, uint64_t seed, sr_cloud** out);
int sr_cloud_point_count(const sr_cloud* c);
sr_status sr_cloud_abscissa(const sr_cloud* c, double* out);
sr_status sr_cloud_write_csv(const sr_cloud* c, const char* path);
void sr_cloud_free(sr_cloud* c);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPECRADIUS_H */
