/* Copyright 2026 The shwave Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libshwave. All functions return a status; on failure the
 * message is available from shwave_last_error() on the calling thread until
 * the next failing call. K = k^2 and Omega = omega^2 throughout. */

#ifndef SHWAVE_SHWAVE_H
#define SHWAVE_SHWAVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SHWAVE_API __declspec(dllexport)
#else
#define SHWAVE_API __attribute__((visibility("default")))
#endif

typedef enum shwave_status {
  SHWAVE_OK = 0,
  SHWAVE_E_ARGUMENT = 1, /* null pointer or out-of-range argument */
  SHWAVE_E_DOMAIN = 2,
  SHWAVE_E_VALIDATION = 3,
  SHWAVE_E_PRECONDITION = 4,
  SHWAVE_E_INTEGRATION = 5,
  SHWAVE_E_NO_NEGATIVE_TAIL = 6,
  SHWAVE_E_CONVERGENCE = 7,
  SHWAVE_E_CONSISTENCY = 8,
  SHWAVE_E_ORACLE_UNAVAILABLE = 9,
  SHWAVE_E_IO = 10,
  SHWAVE_E_BUFFER_TOO_SMALL = 11,
  SHWAVE_E_INTERNAL = 12
} shwave_status;

typedef struct shwave_profile shwave_profile;

SHWAVE_API const char* shwave_version(void);
SHWAVE_API const char* shwave_status_string(shwave_status s);
SHWAVE_API const char* shwave_last_error(void);

/* `json` is a profile entry as in the config file, e.g.
 * {"type": "exp_density", "rho_inf": 1, "delta_rho": 5, "d": 1}.
 * Relative table paths resolve against `base_dir` (may be NULL). */
SHWAVE_API shwave_status shwave_profile_from_json(const char* json, const char* base_dir,
                                                  shwave_profile** out);
/* Sampled profile; y[0] must be 0 and y strictly increasing. */
SHWAVE_API shwave_status shwave_profile_from_table(const double* y, const double* rho,
                                                   const double* mu, size_t n,
                                                   shwave_profile** out);
SHWAVE_API void shwave_profile_destroy(shwave_profile* p);

SHWAVE_API shwave_status shwave_profile_eval(const shwave_profile* p, double y, double* rho,
                                             double* mu);
SHWAVE_API shwave_status shwave_profile_limits(const shwave_profile* p, double* rho_inf,
                                               double* mu_inf);
/* gamma_A(y) = Omega rho(y) - K mu(y). */
SHWAVE_API shwave_status shwave_profile_gamma(const shwave_profile* p, double K, double Omega,
                                              double y, double* gamma);

typedef enum shwave_monotonicity {
  SHWAVE_MONOTONE_POSITIVE = 0,
  SHWAVE_MONOTONE_NEGATIVE = 1,
  SHWAVE_MONOTONE_MIXED = 2
} shwave_monotonicity;

typedef struct shwave_classification {
  shwave_monotonicity monotonicity_at_inf;
  int global_negative;
  double min_mu_over_rho;
  double argmin_depth; /* +inf when the infimum is the limit value */
  int coarse_grid_warning;
} shwave_classification;

SHWAVE_API shwave_status shwave_profile_classify(const shwave_profile* p,
                                                 shwave_classification* out);
/* (K min mu/rho, K mu_inf/rho_inf); lo >= hi means no mode can exist. */
SHWAVE_API shwave_status shwave_admissible_interval(const shwave_profile* p, double K,
                                                    double* lo, double* hi);

typedef enum shwave_coordinates { SHWAVE_DEPTH = 0, SHWAVE_TAU = 1 } shwave_coordinates;

typedef struct shwave_solver_options {
  shwave_coordinates coordinates;
  double rel_tol;
  double abs_tol;
  size_t max_modes;
  double root_tol;
  double residual_tol;
  double tail_stretch;
  unsigned workers;
} shwave_solver_options;

SHWAVE_API void shwave_solver_options_init(shwave_solver_options* opt);

typedef struct shwave_mode {
  double K;
  double Omega;
  int m;
  double phi_surface;
  double phi_decay;
  double residual;
  double y_bar;
  double y_tail;
  int flagged;
} shwave_mode;

enum { SHWAVE_TRUNCATED = 1, SHWAVE_NONEXISTENCE = 2 };

/* Writes up to `capacity` modes; `*count` receives the number found. Returns
 * SHWAVE_E_BUFFER_TOO_SMALL when more modes were found than fit. `flags`
 * (may be NULL) receives SHWAVE_TRUNCATED / SHWAVE_NONEXISTENCE bits.
 * `opt` may be NULL for defaults. */
SHWAVE_API shwave_status shwave_find_modes(const shwave_profile* p, double K,
                                           const shwave_solver_options* opt, shwave_mode* modes,
                                           size_t capacity, size_t* count, int* flags);
/* Angle mismatch Phi(Omega) at the default matching depth. */
SHWAVE_API shwave_status shwave_mismatch(const shwave_profile* p, double K, double Omega,
                                         const shwave_solver_options* opt, double* phi);
/* pi^-1 integral of sqrt(max(gamma_inf, 0) / mu); *finite = 0 when it diverges. */
SHWAVE_API shwave_status shwave_estimate_mode_count(const shwave_profile* p, double K,
                                                    double* estimate, int* finite);

typedef enum shwave_oscillation {
  SHWAVE_OSCILLATORY = 0,
  SHWAVE_NON_OSCILLATORY = 1,
  SHWAVE_INCONCLUSIVE = 2
} shwave_oscillation;

SHWAVE_API shwave_status shwave_oscillation_test(const shwave_profile* p, double y_max,
                                                 shwave_oscillation* verdict);

typedef struct shwave_run_options {
  const char* config_path; /* required */
  const char* output_dir;  /* NULL: from the config */
  const char* fixtures_dir;
  unsigned workers; /* 0: from the config */
  int plot;
  char* summary; /* optional buffer for a one-line summary */
  size_t summary_capacity;
} shwave_run_options;

/* Runs a config file end to end. `*exit_code` follows the CLI convention:
 * 0 success, 1 validation error, 2 solver error, 3 non-existence verdict. */
SHWAVE_API shwave_status shwave_run(const shwave_run_options* opt, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* SHWAVE_SHWAVE_H */
