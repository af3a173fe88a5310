// SPDX-License-Identifier: Apache-2.0
//
// srmcal: symmetric-reciprocal-match VNA calibration with match-model extraction
// Copyright (C) 2026 The srmcal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/*
 * srmcal C interface.
 *
 * Every function returns an srm_status. On failure a thread-local message
 * is available from srm_last_error() until the next call on the same
 * thread. Strings returned through char** are owned by the caller and must
 * be released with srm_string_free().
 */

#ifndef SRMCAL_SRMCAL_H
#define SRMCAL_SRMCAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SRMCAL_BUILDING)
#    define SRM_API __declspec(dllexport)
#  else
#    define SRM_API __declspec(dllimport)
#  endif
#else
#  define SRM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srm_status
{
    SRM_OK = 0,
    SRM_ERR_VALIDATION = 1,
    SRM_ERR_NUMERICAL = 2,
    SRM_ERR_IO = 3
} srm_status;

typedef enum srm_log_level
{
    SRM_LOG_DEBUG = 0,
    SRM_LOG_INFO = 1,
    SRM_LOG_WARN = 2,
    SRM_LOG_ERROR = 3
} srm_log_level;

typedef void (*srm_log_fn)(srm_log_level level, const char *message, void *user);

typedef struct srm_context srm_context;
typedef struct srm_session srm_session;
typedef struct srm_calibration srm_calibration;

SRM_API const char *srm_version(void);
SRM_API const char *srm_last_error(void);
SRM_API void srm_string_free(char *s);

/* Context: thread count (0 = hardware concurrency) and log sink. */
SRM_API srm_status srm_context_create(srm_context **out);
SRM_API void srm_context_destroy(srm_context *ctx);
SRM_API srm_status srm_context_set_threads(srm_context *ctx, size_t threads);
SRM_API srm_status srm_context_set_log(srm_context *ctx, srm_log_fn fn, void *user);

/* Batch commands. summary_json may be NULL. seed is ignored unless has_seed. */
SRM_API srm_status srm_cmd_synth(srm_context *ctx, const char *manifest, const char *out_dir, int has_seed,
                                 uint64_t seed, char **summary_json);
/* match_mode: "ideal", "model-file", "fit" or NULL for the manifest setting. */
SRM_API srm_status srm_cmd_calibrate(srm_context *ctx, const char *manifest, const char *match_mode,
                                     const char *out_dir, int has_seed, uint64_t seed, char **summary_json);
SRM_API srm_status srm_cmd_apply(srm_context *ctx, const char *terms_dir, const char *raw_dut, const char *out_file,
                                 char **summary_json);
SRM_API srm_status srm_cmd_compare(srm_context *ctx, const char *file_a, const char *file_b, const char *out_csv,
                                   char **summary_json);
SRM_API srm_status srm_cmd_fit_report(srm_context *ctx, const char *trace_csv, const char *out_csv,
                                      char **summary_json);

/* Sessions loaded from a manifest. */
SRM_API srm_status srm_session_load(const char *manifest, srm_session **out);
SRM_API void srm_session_free(srm_session *session);
SRM_API size_t srm_session_size(const srm_session *session);
/* Copies min(capacity, size) frequencies in Hz. */
SRM_API srm_status srm_session_frequencies(const srm_session *session, double *out, size_t capacity);

/* Calibration of a loaded session; match_mode as for srm_cmd_calibrate. */
SRM_API srm_status srm_calibrate(srm_context *ctx, const srm_session *session, const char *match_mode,
                                 srm_calibration **out);
SRM_API void srm_calibration_free(srm_calibration *cal);
SRM_API size_t srm_calibration_size(const srm_calibration *cal);
/*
 * Error terms at one point as 9 complex numbers, interleaved re/im:
 * a11 a12 a21 a22 b11 b12 b21 b22 k, followed by a status word
 * (0 ok, 1 interpolated, 2 failed) in out[18]; out needs 19 doubles.
 */
SRM_API srm_status srm_calibration_error_terms(const srm_calibration *cal, size_t index, double *out);
/*
 * Corrects raw S-parameters. s_raw and s_out hold count x 8 doubles per
 * point in the order S11 S12 S21 S22 (re, im); count must equal the size.
 */
SRM_API srm_status srm_calibration_correct(const srm_calibration *cal, const double *s_raw, size_t count,
                                           double *s_out);

/* Conversions on a single matrix, 8 doubles: (q11 q12 q21 q22) re/im. */
SRM_API srm_status srm_s_to_t(const double *s, double *t);
SRM_API srm_status srm_t_to_s(const double *t, double *s);

#ifdef __cplusplus
}
#endif

#endif
