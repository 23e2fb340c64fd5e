/*
 * twistlab — quadratic-twist L-value experiments for a fixed elliptic curve.
 *
 * C interface to the shared library: opaque handles, status codes, and
 * coarse-grained experiment runs driven by a key=value configuration.
 * Every function that can fail returns a twl_status; a human-readable
 * message for the most recent failure on the calling thread is available
 * from twl_last_error().
 */
#ifndef TWISTLAB_H
#define TWISTLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twl_status {
    TWL_OK = 0,
    TWL_ERR_INVALID_ARGUMENT = 1, /* bad inputs, config keys, preconditions */
    TWL_ERR_DOMAIN = 2,           /* argument outside a mathematical domain */
    TWL_ERR_TABLE_RANGE = 3,      /* query beyond the sieved table */
    TWL_ERR_COVERAGE = 4,         /* table too small for the computation */
    TWL_ERR_IO = 5,               /* file system failure */
    TWL_ERR_FORMAT = 6,           /* corrupt cache/CSV */
    TWL_ERR_NUMERICS = 7,         /* quadrature / internal numeric failure */
    TWL_ERR_INTERNAL = 8
} twl_status;

typedef struct twl_curve twl_curve;
typedef struct twl_table twl_table;
typedef struct twl_config twl_config;

const char* twl_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
const char* twl_last_error(void);

/* ---- curve ---------------------------------------------------------- */

/* Long Weierstrass coefficients, conductor N and root number (inputs). */
twl_status twl_curve_new(int64_t a1, int64_t a2, int64_t a3, int64_t a4, int64_t a6,
                         int64_t conductor, int eps_e, twl_curve** out);
void twl_curve_free(twl_curve* curve);

/* #E(F_p) with infinity; nonsingular points at p | N. */
twl_status twl_curve_count_points(const twl_curve* curve, int64_t p, int64_t* count);
twl_status twl_curve_trace(const twl_curve* curve, int64_t p, int64_t* ap);

/* ---- characters and Gauss sums -------------------------------------- */

twl_status twl_kronecker(int64_t a, int64_t b, int* out);
twl_status twl_is_fundamental(int64_t d, int* out);
twl_status twl_root_number(const twl_curve* curve, int64_t d, int* out);
/* tau_v(m) and G_v(m) for odd m, by direct summation. */
twl_status twl_gauss_tau(int64_t v, int64_t m, double* re, double* im);
twl_status twl_gauss_g(int64_t v, int64_t m, double* re, double* im);

/* ---- coefficient table ----------------------------------------------- */

twl_status twl_table_build(const twl_curve* curve, int64_t p_max, int64_t n_max,
                           int threads, int64_t bsgs_threshold, twl_table** out);
twl_status twl_table_load(const twl_curve* curve, const char* path, twl_table** out);
twl_status twl_table_save(const twl_table* table, const char* path);
void twl_table_free(twl_table* table);

int64_t twl_table_p_max(const twl_table* table);
int64_t twl_table_n_max(const twl_table* table);
twl_status twl_table_ap(const twl_table* table, int64_t p, int64_t* ap);
twl_status twl_table_lambda(const twl_table* table, int64_t p, double* lam);
twl_status twl_table_an(const twl_table* table, int64_t n, double* an);
/* Lambda_E(n); exclude_bad != 0 zeroes contributions of p | N0. */
twl_status twl_table_lambda_e(const twl_table* table, int64_t n, int exclude_bad,
                              double* out);
twl_status twl_satake(double lam_p, double* re, double* im);

/* ---- analytic quantities --------------------------------------------- */

double twl_fejer(double x);
double twl_fejer_hat(double t);
double twl_digamma_re(double t); /* Re psi(1+it) */

twl_status twl_afe_kernel(double x, double* out);
twl_status twl_central_value(const twl_curve* curve, const twl_table* table, int64_t d,
                             double tail_eps, double vanish_threshold, double* L_half,
                             int* vanished, int64_t* terms_used);
twl_status twl_ks_statistic(int64_t d, double L_half, double vanish_threshold,
                            double* out); /* -HUGE_VAL when vanished */
twl_status twl_prime_sum(const twl_curve* curve, const twl_table* table, int64_t d,
                         double x, double* out);
twl_status twl_gaussian_moment(int k, double* out);
twl_status twl_zero_weight(const twl_curve* curve, const twl_table* table, int64_t d,
                           double L_param, int exclude_bad, double* weight,
                           double* archimedean, double* prime_side);
twl_status twl_repulsion_integral(const twl_curve* curve, const twl_table* table,
                                  int64_t d, double x, int exclude_bad, double* out);

/* ---- configuration and experiment runs ------------------------------- */

twl_status twl_config_new(twl_config** out);
twl_status twl_config_load(const char* path, twl_config** out);
void twl_config_free(twl_config* cfg);
twl_status twl_config_set(twl_config* cfg, const char* key, const char* value);
/* Writes the value into buf (NUL-terminated); fails with
 * TWL_ERR_INVALID_ARGUMENT if buf is too small or the key is unknown. */
twl_status twl_config_get(const twl_config* cfg, const char* key, char* buf,
                          size_t buflen);

/* Runs write their output files per the config and hand back a one-object
 * JSON summary (free with twl_string_free).  json_summary may be NULL. */
twl_status twl_run_coeffs(const twl_config* cfg, char** json_summary);
twl_status twl_run_family(const twl_config* cfg, char** json_summary);
twl_status twl_run_sweep(const twl_config* cfg, char** json_summary);
twl_status twl_run_density(const twl_config* cfg, char** json_summary);
twl_status twl_run_moments(const twl_config* cfg, char** json_summary);
twl_status twl_run_report(const twl_config* cfg, const char* csv_path,
                          char** json_summary);
void twl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* TWISTLAB_H */
