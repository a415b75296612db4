/* Copyright 2026 The levelset Authors. All Rights Reserved.
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
 * =============================================================================
 */

/* C interface to the levelset library.
 *
 * Every function returns an ls_status. On failure the message of the most
 * recent error on the calling thread is available from ls_last_error().
 * Handles are opaque and owned by the caller.
 */

#ifndef LEVELSET_LEVELSET_H
#define LEVELSET_LEVELSET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LEVELSET_BUILDING_LIBRARY)
#define LEVELSET_API __declspec(dllexport)
#else
#define LEVELSET_API __declspec(dllimport)
#endif
#else
#define LEVELSET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ls_status {
  LS_OK = 0,
  LS_ERR_INVALID_ARGUMENT = 1,
  LS_ERR_INVALID_HYPERPARAMETER = 2,
  LS_ERR_INVALID_DOMAIN = 3,
  LS_ERR_PRIOR_NOT_PD = 4,
  LS_ERR_SOLVE_FAILURE = 5,
  LS_ERR_NUMERICAL_BREAKDOWN = 6,
  LS_ERR_INDEX_OUT_OF_RANGE = 7,
  LS_ERR_INVALID_DELTA = 8,
  LS_ERR_LENGTH_MISMATCH = 9,
  LS_ERR_EMPTY_SAFE_SET = 10,
  LS_ERR_INVALID_BOUNDS_INPUT = 11,
  LS_ERR_CONFIG = 12,
  LS_ERR_IO = 13,
  LS_ERR_INTERNAL = 14
} ls_status;

/* Message for the last failure on this thread ("" if none). Valid until the
 * next failing call on the same thread. */
LEVELSET_API const char* ls_last_error(void);
LEVELSET_API const char* ls_status_name(ls_status status);
LEVELSET_API const char* ls_version(void);

typedef struct ls_gp ls_gp;

/* Prior over a box grid (row-major, last axis fastest) with a constant mean
 * and a squared-exponential kernel. */
LEVELSET_API ls_status ls_gp_create_grid(const double* lower, const double* upper,
                                         const size_t* resolution, size_t dim, double prior_mean,
                                         double sigma_ker, double length_scale, double noise_var,
                                         ls_gp** out);

/* Prior from an explicit mean (m) and row-major covariance (m x m). */
LEVELSET_API ls_status ls_gp_create(const double* mean, const double* cov, size_t m,
                                    double noise_var, ls_gp** out);

LEVELSET_API ls_status ls_gp_clone(const ls_gp* gp, ls_gp** out);
LEVELSET_API void ls_gp_destroy(ls_gp* gp);

LEVELSET_API ls_status ls_gp_size(const ls_gp* gp, size_t* out);
LEVELSET_API ls_status ls_gp_observe(ls_gp* gp, size_t index, double y);
LEVELSET_API ls_status ls_gp_mean(const ls_gp* gp, size_t index, double* out);
LEVELSET_API ls_status ls_gp_variance(const ls_gp* gp, size_t index, double* out);
LEVELSET_API ls_status ls_gp_covariance(const ls_gp* gp, size_t i, size_t j, double* out);

/* flags (may be NULL) receives m entries of 0/1; count (may be NULL) the set size. */
LEVELSET_API ls_status ls_classify(const ls_gp* gp, double t, double delta, double shift,
                                   unsigned char* flags, size_t* count);

LEVELSET_API ls_status ls_expected_set_size(const ls_gp* gp, size_t sample_at, double t,
                                            double delta, double* out);

typedef enum ls_acq_kind {
  LS_ACQ_RMILE = 0,
  LS_ACQ_MILE = 1,
  LS_ACQ_MULTI = 2,
  LS_ACQ_VARRED = 3,
  LS_ACQ_STRADDLE = 4,
  LS_ACQ_LSE = 5,
  LS_ACQ_RANDOM = 6
} ls_acq_kind;

typedef struct ls_acq_spec {
  ls_acq_kind kind;
  double t;
  double delta;
  double epsilon;
  double gamma;
  double beta_lse;
  const double* thresholds; /* multi; NULL means {t} */
  size_t n_thresholds;
  uint64_t seed; /* random */
} ls_acq_spec;

/* Library defaults for `kind` at threshold t. */
LEVELSET_API ls_acq_spec ls_acq_spec_default(ls_acq_kind kind, double t);

typedef struct ls_safe_spec {
  double t;
  double gamma_safe;
} ls_safe_spec;

/* scores receives m values. */
LEVELSET_API ls_status ls_acq_scores(const ls_gp* gp, const ls_acq_spec* spec, double* scores);

/* safe may be NULL. score may be NULL. */
LEVELSET_API ls_status ls_select_point(const ls_gp* gp, const ls_acq_spec* spec,
                                       const ls_safe_spec* safe, size_t* index, double* score);

/* threads < 0 reads LEVELSET_THREADS; 0 means one worker per core. */
LEVELSET_API ls_status ls_run_file(const char* config_path, const char* out_path, int threads);

/* acquisitions is a comma-separated list such as "rmile,straddle,lse". */
LEVELSET_API ls_status ls_compare_file(const char* config_path, const char* acquisitions,
                                       const char* out_path, int threads);

/* level 0 = quick, 1 = full. *passed is 1 iff every check passed. The report
 * is released with ls_string_free. */
LEVELSET_API ls_status ls_verify(int level, int inject_fault, int* passed, char** report);

LEVELSET_API void ls_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LEVELSET_LEVELSET_H */
