/* onebit: channel estimation for massive MIMO uplinks with one-bit ADCs
 * Copyright (C) 2026 The onebit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ONEBIT_H
#define ONEBIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ONEBIT_API __declspec(dllexport)
#else
#define ONEBIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum onebit_status
{
    ONEBIT_OK = 0,
    ONEBIT_INVALID_ARGUMENT = 1,
    ONEBIT_CONFIG = 2,
    ONEBIT_NUMERICAL = 3,
    ONEBIT_IO = 4,
    ONEBIT_DIMENSION = 5,
    ONEBIT_INTERNAL = 6
} onebit_status;

typedef enum onebit_profile
{
    ONEBIT_PROFILE_FAST = 0,
    ONEBIT_PROFILE_PAPER = 1
} onebit_profile;

typedef struct onebit_config onebit_config;
typedef struct onebit_result onebit_result;

typedef struct onebit_row
{
    const char *experiment;
    const char *estimator;
    const char *metric;
    int slot;
    double snr_db;
    double value;
    double stderr_value;
    uint64_t seed;
} onebit_row;

/* One config problem. `field` and `message` stay valid until the next call on the same thread. */
typedef struct onebit_issue
{
    const char *field;
    int line;
    const char *message;
} onebit_issue;

typedef void (*onebit_warning_fn)(const char *message, void *user);

ONEBIT_API const char *onebit_version(void);
ONEBIT_API const char *onebit_status_name(onebit_status status);

/* Message of the last failed call on this thread, "" if none. */
ONEBIT_API const char *onebit_last_error(void);
/* Config issues of the last failed config call on this thread. */
ONEBIT_API size_t onebit_last_issue_count(void);
ONEBIT_API onebit_status onebit_last_issue(size_t index, onebit_issue *out);

/* NULL restores the default handler (stderr). */
ONEBIT_API void onebit_set_warning_handler(onebit_warning_fn fn, void *user);

ONEBIT_API onebit_status onebit_config_create(onebit_profile profile, onebit_config **out);
/* `profile` may be NULL to use the profile named in the file. */
ONEBIT_API onebit_status onebit_config_load_file(const char *path, const onebit_profile *profile,
                                                 onebit_config **out);
ONEBIT_API onebit_status onebit_config_load_string(const char *text, const onebit_profile *profile,
                                                   onebit_config **out);
/* Key is a dotted path or alias (seed, trials, slots, ...); value uses config syntax. */
ONEBIT_API onebit_status onebit_config_set(onebit_config *config, const char *key, const char *value);
/* Applies all edits, then validates once. On failure the config is unchanged. */
ONEBIT_API onebit_status onebit_config_set_many(onebit_config *config, const char *const *keys,
                                                const char *const *values, size_t count);
ONEBIT_API onebit_status onebit_config_validate(const onebit_config *config);
/* Writes at most `capacity` bytes including the terminator; `needed` gets the full size. */
ONEBIT_API onebit_status onebit_config_emit(const onebit_config *config, char *buffer, size_t capacity,
                                            size_t *needed);
ONEBIT_API void onebit_config_destroy(onebit_config *config);

ONEBIT_API onebit_status onebit_run(const onebit_config *config, onebit_result **out);
ONEBIT_API size_t onebit_result_rows(const onebit_result *result);
ONEBIT_API onebit_status onebit_result_row(const onebit_result *result, size_t index, onebit_row *out);
ONEBIT_API onebit_status onebit_result_csv(const onebit_result *result, char *buffer, size_t capacity,
                                           size_t *needed);
ONEBIT_API onebit_status onebit_result_write_csv(const onebit_result *result, const char *path);
ONEBIT_API void onebit_result_destroy(onebit_result *result);

ONEBIT_API onebit_status onebit_jakes(double speed_kmh, double carrier_hz, double interval_s, double *out);
ONEBIT_API onebit_status onebit_blmmse_nmse(int K, double rho, double *out);
ONEBIT_API onebit_status onebit_fixed_point_gamma(int K, double rho, double eta, double alpha, double *out);
ONEBIT_API onebit_status onebit_alpha_upper_bound(double beta, double m_pred, double *out);

#ifdef __cplusplus
}
#endif

#endif
