/* Copyright 2026 The ladder-sqd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file ladder_sqd.h
 * @brief C interface to the ladder SQD pipeline.
 *
 * Handles are opaque. Every call that can fail returns an lsqd_status; the
 * message of the most recent failure on the calling thread is available
 * from lsqd_last_error(). Strings returned through `char**` are owned by the
 * caller and released with lsqd_string_free().
 */

#ifndef LADDER_SQD_H_
#define LADDER_SQD_H_

#include <stdint.h>

#if defined(_WIN32)
#define LSQD_API __declspec(dllexport)
#else
#define LSQD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lsqd_status {
  LSQD_OK = 0,
  LSQD_INVALID_ARGUMENT = 1,
  LSQD_PARSE = 2,
  LSQD_UNSUPPORTED = 3,
  LSQD_NOT_FOUND = 4,
  LSQD_NOT_CONVERGED = 5,
  LSQD_BUDGET_EXCEEDED = 6,
  LSQD_IO = 7,
  LSQD_INTERNAL = 8,
  /* The command ran but at least one oracle check failed. */
  LSQD_CHECK_FAILED = 9
} lsqd_status;

typedef struct lsqd_config lsqd_config;
typedef struct lsqd_report lsqd_report;

LSQD_API const char* lsqd_version(void);
LSQD_API const char* lsqd_last_error(void);
LSQD_API const char* lsqd_status_name(lsqd_status status);

/* Default configuration. */
LSQD_API lsqd_status lsqd_config_new(lsqd_config** out);
LSQD_API lsqd_status lsqd_config_load(const char* path, lsqd_config** out);
LSQD_API lsqd_status lsqd_config_parse(const char* text, lsqd_config** out);
LSQD_API void lsqd_config_free(lsqd_config* cfg);
/* key is "section.key", e.g. "model.n_rungs". */
LSQD_API lsqd_status lsqd_config_set(lsqd_config* cfg, const char* key, const char* value);
LSQD_API lsqd_status lsqd_config_validate(const lsqd_config* cfg);
LSQD_API lsqd_status lsqd_config_dump(const lsqd_config* cfg, char** out);
LSQD_API lsqd_status lsqd_config_hash(const lsqd_config* cfg, uint64_t* out);

/* Runs "tune-gap", "run-sqd", "sweep", "correlations" or "oracle-check".
 * On LSQD_OK and LSQD_CHECK_FAILED *out holds the report. */
LSQD_API lsqd_status lsqd_run(const lsqd_config* cfg, const char* command, lsqd_report** out);
LSQD_API const char* lsqd_report_json(const lsqd_report* report);
LSQD_API const char* lsqd_report_manifest(const lsqd_report* report);
LSQD_API double lsqd_report_seconds(const lsqd_report* report);
LSQD_API void lsqd_report_free(lsqd_report* report);

LSQD_API void lsqd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LADDER_SQD_H_ */
