#pragma once

/* C interface to the perco experiment library. Every function returns a
 * perco_status; on failure perco_last_error() describes the problem. Strings
 * handed out by the library are freed with perco_string_free, handles with
 * their own *_free function. All functions are safe to call from several
 * threads on distinct handles. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define PERCO_API __declspec(dllexport)
#else
#  define PERCO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum perco_status {
  PERCO_OK = 0,
  PERCO_ERR_CONFIG = 1,      /* parse or validation error, message is line-anchored */
  PERCO_ERR_RESOURCE = 2,    /* point or pair budget exceeded */
  PERCO_ERR_CONTRACT = 3,    /* operation not defined for this model */
  PERCO_ERR_WINDOW = 4,      /* sampling window does not cover the event */
  PERCO_ERR_CONSISTENCY = 5, /* internal invariant failed */
  PERCO_ERR_IO = 6,          /* file access or malformed result file */
  PERCO_ERR_INVALID_ARG = 7, /* null pointer or bad argument */
  PERCO_ERR_INTERNAL = 8
} perco_status;

typedef struct perco_config perco_config;
typedef struct perco_result perco_result;

/* Message of the last failure on the calling thread; empty when none. The
 * pointer stays valid until the next call on the same thread. */
PERCO_API const char* perco_last_error(void);
PERCO_API const char* perco_status_name(perco_status status);
PERCO_API const char* perco_version(void);

PERCO_API void perco_string_free(char* s);

/* Configs */
PERCO_API perco_status perco_config_parse(const char* text, perco_config** out);
PERCO_API perco_status perco_config_load(const char* path, perco_config** out);
PERCO_API perco_status perco_config_set(perco_config* cfg, const char* key, const char* value);
PERCO_API perco_status perco_config_serialize(const perco_config* cfg, char** out);
PERCO_API void perco_config_free(perco_config* cfg);

/* Subcommand names, NULL terminated. */
PERCO_API const char* const* perco_subcommands(void);

/* Runs a subcommand ("estimate", "probe-h", ...). threads >= 1 only changes
 * the schedule, never the result. */
PERCO_API perco_status perco_run(const char* subcommand, const perco_config* cfg, int threads, perco_result** out);

/* Deterministic part of the result file (everything after the first line). */
PERCO_API perco_status perco_result_body(const perco_result* res, char** out);
/* Full result file text with the given timestamp in the first line. */
PERCO_API perco_status perco_result_text(const perco_result* res, const char* timestamp, char** out);
/* Writes <dir>/<subcommand>.csv plus any attachments; the path of the table is
 * returned in *path when path is not NULL. */
PERCO_API perco_status perco_result_write(const perco_result* res, const char* dir, char** path);
PERCO_API size_t perco_result_row_count(const perco_result* res);
PERCO_API void perco_result_free(perco_result* res);

/* Tidy "series,x,y,y_lo,y_hi" text from the text of a result file. */
PERCO_API perco_status perco_plot_data(const char* result_text, char** out);

/* Points per replicate allowed by the sampler (PERCO_BUDGET_POINTS). */
PERCO_API double perco_point_budget(void);

#ifdef __cplusplus
}
#endif
