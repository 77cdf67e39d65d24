// Copyright 2026 The lfdq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the lfdq core. Every object is an opaque handle owned by
 * the caller and released with the matching *_free function. Functions
 * return LFDQ_OK or an error status; lfdq_last_error() then holds a
 * message for the calling thread. */

#ifndef LFDQ_LFDQ_H_
#define LFDQ_LFDQ_H_

#include <stddef.h>

#if defined(LFDQ_BUILDING_LIBRARY)
#define LFDQ_API __attribute__((visibility("default")))
#else
#define LFDQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lfdq_status {
  LFDQ_OK = 0,
  LFDQ_ERR_INVALID_ARGUMENT = 1,
  LFDQ_ERR_FILE_MISSING = 2,
  LFDQ_ERR_SCHEMA_VIOLATION = 3,
  LFDQ_ERR_NON_MONOTONIC_TIME = 4,
  LFDQ_ERR_EMPTY_DEMONSTRATION = 5,
  LFDQ_ERR_DEGENERATE_DATA = 6,
  LFDQ_ERR_SINGULAR_COVARIANCE = 7,
  LFDQ_ERR_SINGULAR_SYSTEM = 8,
  LFDQ_ERR_EMPTY_SET = 9,
  LFDQ_ERR_UNKNOWN_FACE = 10,
  LFDQ_ERR_NO_FEASIBLE_PLAN = 11,
  LFDQ_ERR_EMPTY_OUTCOMES = 12,
  LFDQ_ERR_MISSING_SESSION = 13,
  LFDQ_ERR_ZERO_VARIANCE = 14,
  LFDQ_ERR_LENGTH_MISMATCH = 15,
  LFDQ_ERR_EVALUATION_FAILURE = 16,
  LFDQ_ERR_INTERNAL = 99
} lfdq_status;

typedef enum lfdq_face { LFDQ_FACE_LOW = 0, LFDQ_FACE_HIGH = 1 } lfdq_face;

typedef struct lfdq_chain lfdq_chain;
typedef struct lfdq_world lfdq_world;
typedef struct lfdq_demoset lfdq_demoset;
typedef struct lfdq_model lfdq_model;
typedef struct lfdq_cohort lfdq_cohort;
typedef struct lfdq_results lfdq_results;

typedef void (*lfdq_line_fn)(const char* line, void* user);

LFDQ_API const char* lfdq_version(void);
LFDQ_API const char* lfdq_status_name(lfdq_status status);
/* Message of the last failed call on this thread; "" after a success. */
LFDQ_API const char* lfdq_last_error(void);
/* Frees strings returned through char** out-parameters. */
LFDQ_API void lfdq_string_free(char* text);

/* Kinematic chain. */
LFDQ_API lfdq_status lfdq_chain_reference(lfdq_chain** out);
LFDQ_API lfdq_status lfdq_chain_load(const char* path, lfdq_chain** out);
LFDQ_API lfdq_status lfdq_chain_save(const lfdq_chain* chain, const char* path);
LFDQ_API void lfdq_chain_free(lfdq_chain* chain);
/* Tool pose: position (m) and quaternion (w, x, y, z). */
LFDQ_API lfdq_status lfdq_chain_forward(const lfdq_chain* chain, const double q[7],
                                        double position[3], double quat_wxyz[4]);
/* 6x7 geometric Jacobian, row-major, linear rows first. */
LFDQ_API lfdq_status lfdq_chain_jacobian(const lfdq_chain* chain, const double q[7],
                                         double jacobian[42]);

/* Task world. */
LFDQ_API lfdq_status lfdq_world_reference(lfdq_world** out);
LFDQ_API lfdq_status lfdq_world_load(const char* path, lfdq_world** out);
LFDQ_API lfdq_status lfdq_world_save(const lfdq_world* world, const char* path);
LFDQ_API void lfdq_world_free(lfdq_world* world);
/* Press pose of demonstrated target `index` (0..8) on a face. */
LFDQ_API lfdq_status lfdq_world_target(const lfdq_world* world, lfdq_face face, int index,
                                       double position[3], double quat_wxyz[4]);

/* Demonstration sets. */
LFDQ_API lfdq_status lfdq_demoset_load(const char* path, lfdq_demoset** out);
/* Reads individual demonstration files into one set. */
LFDQ_API lfdq_status lfdq_demoset_from_files(const lfdq_chain* chain, const char* const* paths,
                                             size_t count, lfdq_demoset** out);
LFDQ_API lfdq_status lfdq_demoset_save(const lfdq_demoset* set, const char* path);
LFDQ_API lfdq_status lfdq_demoset_export_csv(const lfdq_demoset* set, const char* directory);
LFDQ_API lfdq_status lfdq_demoset_align(const lfdq_demoset* set, int length, lfdq_demoset** out);
LFDQ_API size_t lfdq_demoset_size(const lfdq_demoset* set);
LFDQ_API void lfdq_demoset_free(lfdq_demoset* set);

/* TP-GMM with start and target frames, fitted on an aligned set. */
LFDQ_API lfdq_status lfdq_model_fit(const lfdq_demoset* aligned, const lfdq_world* world,
                                    int components, double regularization, lfdq_model** out);
LFDQ_API lfdq_status lfdq_model_load(const char* path, lfdq_model** out);
LFDQ_API lfdq_status lfdq_model_save(const lfdq_model* model, const char* path);
LFDQ_API void lfdq_model_free(lfdq_model* model);
/* Writes `samples` rows of (phase, x, y, z, qw, qx, qy, qz) to `out`. */
LFDQ_API lfdq_status lfdq_model_generate(const lfdq_model* model, const lfdq_chain* chain,
                                         const double target_position[3],
                                         const double target_quat_wxyz[4], int samples,
                                         double* out);

/* Synthetic cohorts. threads <= 0 uses every core. */
LFDQ_API lfdq_status lfdq_cohort_synthesize(const char* spec_path, const char* out_dir,
                                            int threads);
LFDQ_API lfdq_status lfdq_cohort_load(const char* directory, lfdq_cohort** out);
LFDQ_API size_t lfdq_cohort_demo_count(const lfdq_cohort* cohort);
LFDQ_API size_t lfdq_cohort_trial_count(const lfdq_cohort* cohort);
LFDQ_API void lfdq_cohort_free(lfdq_cohort* cohort);

/* Evaluates every trial of the cohort and writes trials.json and rates.csv. */
LFDQ_API lfdq_status lfdq_study_evaluate(const lfdq_cohort* cohort, const lfdq_world* world,
                                         const char* params_path, const char* results_dir);

LFDQ_API lfdq_status lfdq_results_load(const char* directory, lfdq_results** out);
LFDQ_API size_t lfdq_results_trial_count(const lfdq_results* results);
/* Threshold the results were evaluated with. */
LFDQ_API double lfdq_results_delta(const lfdq_results* results);
LFDQ_API void lfdq_results_free(lfdq_results* results);
/* Quality and adapter labels as JSON text; free with lfdq_string_free. */
LFDQ_API lfdq_status lfdq_results_classify(const lfdq_results* results, double delta,
                                           char** labels_json, int* fast_count,
                                           int* slow_count);
/* Writes rates.csv and summary.json to `out_dir`. */
LFDQ_API lfdq_status lfdq_results_report(const lfdq_results* results, double delta,
                                         const char* out_dir);
/* Pooled correlation; *defined is 0 when the rates have no variance. */
LFDQ_API lfdq_status lfdq_results_rho(const lfdq_results* results, double* rho, int* defined);

/* Stateless helpers. */
LFDQ_API lfdq_status lfdq_pearson(const double* x, const double* y, size_t n, double* rho);
/* *is_high = task_rate > delta. */
LFDQ_API lfdq_status lfdq_classify_quality(double task_rate, double delta, int* is_high);

/* Runs the built-in oracle checks, one line per check through `emit`.
 * *failures receives the number of failed checks. */
LFDQ_API lfdq_status lfdq_selftest(lfdq_line_fn emit, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* LFDQ_LFDQ_H_ */
