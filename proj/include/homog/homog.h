/* Copyright 2026 The homog Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the masonry homogenization library.
 *
 * Every function returns a homog_status. On failure, homog_last_error()
 * returns a JSON object {"status": ..., "code": ..., "message": ...} that
 * stays valid until the next failing call on the same thread.
 */

#ifndef HOMOG_HOMOG_H_
#define HOMOG_HOMOG_H_

#include <stddef.h>

#if defined(_WIN32)
#define HOMOG_API __declspec(dllexport)
#else
#define HOMOG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum homog_status {
  HOMOG_OK = 0,
  HOMOG_INVALID_ARGUMENT = 1,
  HOMOG_INVALID_ELASTIC = 2,
  HOMOG_NOT_SPD = 3,
  HOMOG_OUT_OF_SEGMENT = 4,
  HOMOG_SNAP_BACK = 5,
  HOMOG_GEOMETRY = 6,
  HOMOG_DIVERGED = 7,
  HOMOG_RANK_DEFICIENT = 8,
  HOMOG_SINGULAR = 9,
  HOMOG_OUT_OF_BOUNDS = 10,
  HOMOG_NO_PROGRESS = 11,
  HOMOG_MALFORMED_CSV = 12,
  HOMOG_CONFIG = 13,
  HOMOG_IO = 14,
  HOMOG_INTERNAL = 15
} homog_status;

HOMOG_API const char* homog_version(void);
/* Stable lower-case name, e.g. "no_progress". */
HOMOG_API const char* homog_status_name(homog_status status);
HOMOG_API const char* homog_last_error(void);

/* ---- Pipeline ---------------------------------------------------------- */

typedef struct homog_pipeline homog_pipeline;

typedef void (*homog_progress_fn)(const char* stage, int done, int total, void* user);

/* config_path may be NULL for the built-in defaults. */
HOMOG_API homog_status homog_pipeline_create(const char* config_path, homog_pipeline** out);
HOMOG_API homog_status homog_pipeline_create_from_string(const char* config_text, homog_pipeline** out);
HOMOG_API void homog_pipeline_free(homog_pipeline* p);

HOMOG_API homog_status homog_pipeline_set_out_dir(homog_pipeline* p, const char* dir);
/* jobs <= 0 keeps the configured worker counts. */
HOMOG_API homog_status homog_pipeline_set_jobs(homog_pipeline* p, int jobs);
/* "1,13,20-22"; NULL or "" selects every case. */
HOMOG_API homog_status homog_pipeline_set_cases(homog_pipeline* p, const char* list);
HOMOG_API homog_status homog_pipeline_set_seed(homog_pipeline* p, const char* seed);
HOMOG_API homog_status homog_pipeline_set_progress(homog_pipeline* p, homog_progress_fn fn, void* user);

/* command: "rve", "vlab", "isotropize", "calibrate", "validate" or "plot". */
HOMOG_API homog_status homog_pipeline_run(homog_pipeline* p, const char* command);
/* JSON summary of the last successful run; owned by the handle. */
HOMOG_API const char* homog_pipeline_summary(const homog_pipeline* p);
/* Effective configuration as JSON; owned by the handle. */
HOMOG_API const char* homog_pipeline_config(homog_pipeline* p);

/* ---- Calibrated macro law ---------------------------------------------- */

typedef struct homog_law homog_law;

/* Damage state of one integration point: r+, r-, d+, d-. */
#define HOMOG_STATE_SIZE 4

HOMOG_API homog_status homog_law_load(const char* path, homog_law** out);
HOMOG_API void homog_law_free(homog_law* law);
HOMOG_API homog_status homog_law_virgin(const homog_law* law, double state[HOMOG_STATE_SIZE]);
/* Largest element length the law can be regularised at [m]. */
HOMOG_API homog_status homog_law_max_length(const homog_law* law, double* out);
/* Stress for the plane-stress strain (exx, eyy, gxy) at an element of
 * length l_macro. state is read and overwritten with the updated state. */
HOMOG_API homog_status homog_law_integrate(const homog_law* law, double l_macro, const double strain[3],
                                           double state[HOMOG_STATE_SIZE], double stress[3]);

#ifdef __cplusplus
}
#endif

#endif /* HOMOG_HOMOG_H_ */
