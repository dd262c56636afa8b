/*
 * Copyright 2026 glmrate developers
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

/*
 * glmrate C API.
 *
 * Opaque handles own their data; free each with the matching *_free
 * function. Every fallible call returns a glmr_status; on failure the
 * message is available from glmr_last_error() on the same thread until the
 * next failing call. Strings returned through `char**` are heap allocated
 * and must be released with glmr_string_free().
 *
 * All handles are immutable after creation and may be shared between
 * threads for concurrent reads.
 */
#ifndef GLMRATE_GLMRATE_H
#define GLMRATE_GLMRATE_H

#include <stddef.h>

#if defined(GLMRATE_BUILDING_LIBRARY)
#define GLMRATE_API __attribute__((visibility("default")))
#else
#define GLMRATE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum glmr_status {
  GLMR_OK = 0,
  GLMR_ERR_PARSE = 1,
  GLMR_ERR_SCHEMA = 2,
  GLMR_ERR_VALUE = 3,
  GLMR_ERR_DOMAIN = 4,
  GLMR_ERR_RANK = 5,
  GLMR_ERR_CONVERGENCE = 6,
  GLMR_ERR_NESTING = 7,
  GLMR_ERR_IO = 8,
  GLMR_ERR_ARGUMENT = 9,
  GLMR_ERR_INTERNAL = 10
} glmr_status;

typedef enum glmr_format {
  GLMR_FORMAT_TEXT = 0,
  GLMR_FORMAT_JSON = 1,
  GLMR_FORMAT_CSV = 2 /* tariff tables only */
} glmr_format;

typedef struct glmr_dataset glmr_dataset;
typedef struct glmr_fit glmr_fit;
typedef struct glmr_bm_table glmr_bm_table;

typedef struct glmr_coefficient {
  const char* label; /* owned by the fit */
  double estimate;
  double std_error;
  double z_value;
  double p_value;
} glmr_coefficient;

typedef struct glmr_fit_summary {
  size_t n_observations;
  size_t n_parameters;
  double deviance;
  double scaled_deviance;
  double null_deviance;
  int df_residual;
  int df_null;
  double log_likelihood;
  double aic;
  int iterations;
  int converged;
} glmr_fit_summary;

typedef struct glmr_test_result {
  double statistic;
  int df;
  double p_value;
  double alpha;
  double critical_value;
  int reject; /* 1 when p_value < alpha */
} glmr_test_result;

GLMRATE_API const char* glmr_version(void);
GLMRATE_API const char* glmr_last_error(void);
GLMRATE_API const char* glmr_status_name(glmr_status status);
GLMRATE_API void glmr_string_free(char* s);

/* Portfolio data. The schema is inferred from the CSV: every column except
 * `claims` and `exposure` is a factor whose smallest level is the reference. */
GLMRATE_API glmr_status glmr_dataset_load_file(const char* path, glmr_dataset** out);
GLMRATE_API glmr_status glmr_dataset_load_csv(const char* data, size_t length, glmr_dataset** out);
GLMRATE_API size_t glmr_dataset_rows(const glmr_dataset* ds);
GLMRATE_API double glmr_dataset_total_claims(const glmr_dataset* ds);
GLMRATE_API int glmr_dataset_exposure_defaulted(const glmr_dataset* ds);
GLMRATE_API void glmr_dataset_free(glmr_dataset* ds);

/* Fitting. `family` is "poisson" or "normal". */
GLMRATE_API glmr_status glmr_fit_formula(const glmr_dataset* ds, const char* formula, const char* family,
                                         glmr_fit** out);
/* Raw design: `x` is n*p row-major; offset, weights and labels may be NULL. */
GLMRATE_API glmr_status glmr_fit_matrix(size_t n, size_t p, const double* x, const double* y, const double* offset,
                                        const double* weights, const char* const* labels, const char* family,
                                        glmr_fit** out);
GLMRATE_API void glmr_fit_free(glmr_fit* fit);
GLMRATE_API glmr_status glmr_fit_summary_get(const glmr_fit* fit, glmr_fit_summary* out);
GLMRATE_API glmr_status glmr_fit_coefficient(const glmr_fit* fit, size_t index, glmr_coefficient* out);
GLMRATE_API glmr_status glmr_fit_fitted_means(const glmr_fit* fit, double* out, size_t capacity);
GLMRATE_API glmr_status glmr_fit_report(const glmr_fit* fit, glmr_format format, char** out);

/* Inference. */
GLMRATE_API glmr_status glmr_chi_square_sf(double x, int df, double* out);
GLMRATE_API glmr_status glmr_chi_square_quantile(double alpha, int df, double* out);
GLMRATE_API double glmr_standard_normal_sf(double z);
GLMRATE_API glmr_status glmr_goodness_of_fit(const glmr_fit* fit, double alpha, glmr_test_result* out);
GLMRATE_API glmr_status glmr_compare_nested(const glmr_fit* reduced, const glmr_fit* full, double alpha,
                                            glmr_test_result* out);
GLMRATE_API glmr_status glmr_compare_report(const glmr_fit* reduced, const glmr_fit* full, double alpha,
                                            glmr_format format, char** out);
GLMRATE_API glmr_status glmr_select_by_aic(const glmr_fit* const* fits, size_t count, size_t* best);

/* Tariffs. A cell is given as parallel arrays of factor names and levels. */
GLMRATE_API glmr_status glmr_predict_rate(const glmr_fit* fit, const char* const* factors,
                                          const char* const* levels, size_t count, double* out);
GLMRATE_API glmr_status glmr_tariff_render(const glmr_fit* fit, glmr_format format, char** out);
GLMRATE_API glmr_status glmr_tariff_write(const glmr_fit* fit, const char* path, glmr_format format);

/* Bonus-Malus. */
GLMRATE_API glmr_status glmr_bm_table_standard(glmr_bm_table** out);
GLMRATE_API glmr_status glmr_bm_table_from_json(const char* text, size_t length, glmr_bm_table** out);
GLMRATE_API glmr_status glmr_bm_table_load_file(const char* path, glmr_bm_table** out);
GLMRATE_API void glmr_bm_table_free(glmr_bm_table* table);
GLMRATE_API int glmr_bm_steps(const glmr_bm_table* table);
GLMRATE_API glmr_status glmr_bm_next_step(const glmr_bm_table* table, int step, int claims, int* out);
GLMRATE_API glmr_status glmr_bm_premium(const glmr_bm_table* table, int step, double base_premium, double* out);
GLMRATE_API glmr_status glmr_bm_stationary(const glmr_bm_table* table, double lambda, double* out, size_t capacity);
GLMRATE_API glmr_status glmr_bm_simulate_report(const glmr_bm_table* table, int start_step, const int* claims,
                                                size_t years, double base_premium, glmr_format format, char** out);
GLMRATE_API glmr_status glmr_bm_steady_report(const glmr_bm_table* table, double lambda, double base_premium,
                                              glmr_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* GLMRATE_GLMRATE_H */
