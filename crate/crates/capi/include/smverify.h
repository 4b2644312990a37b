/* C interface of the smverify verification engine. */

#ifndef SMVERIFY_H
#define SMVERIFY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
enum SmvStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  /**
   * Every requested suite passed.
   */
  SMV_STATUS_OK = 0,
  /**
   * The run completed but at least one suite failed.
   */
  SMV_STATUS_SUITE_FAILURE = 1,
  /**
   * The configuration could not be parsed or the run could not start.
   */
  SMV_STATUS_CONFIG_ERROR = 2,
  /**
   * A required pointer argument was null.
   */
  SMV_STATUS_NULL_ARGUMENT = -1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum SmvStatus SmvStatus;
#else
typedef int32_t SmvStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * An opaque verification run: a parsed configuration plus, after
 * execution, the report and status.
 */
typedef struct SmvRun SmvRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a JSON configuration into a new run handle.
 *
 * On success writes the handle to `out` and returns `Ok`. On parse errors
 * returns `ConfigError` and leaves `out` untouched.
 *
 * # Safety
 * `config_json` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
SmvStatus smv_run_new(const char *config_json, struct SmvRun **out);

/**
 * Execute the run. Returns `Ok` when every suite passed, `SuiteFailure`
 * when the run completed with failures, `ConfigError` when it could not
 * start; the error message is then available from [`smv_run_error`].
 *
 * # Safety
 * `run` must be a handle from [`smv_run_new`] that has not been freed.
 */
SmvStatus smv_run_execute(struct SmvRun *run);

/**
 * The JSON report of an executed run, or null when the run has not been
 * executed. The string is owned by the handle.
 *
 * # Safety
 * `run` must be a live handle.
 */
const char *smv_run_report_json(const struct SmvRun *run);

/**
 * The last execution error of the handle, or null. Owned by the handle.
 *
 * # Safety
 * `run` must be a live handle.
 */
const char *smv_run_error(const struct SmvRun *run);

/**
 * Release a run handle.
 *
 * # Safety
 * `run` must be a handle from [`smv_run_new`], freed at most once.
 */
void smv_run_free(struct SmvRun *run);

/**
 * The default configuration as JSON. Release with [`smv_string_free`].
 */
char *smv_default_config_json(void);

/**
 * The preset catalogs (chart, vacuum, constants) as JSON. Release with
 * [`smv_string_free`].
 */
char *smv_list_presets_json(void);

/**
 * Release a string returned by one of the `smv_*_json` functions.
 *
 * # Safety
 * `text` must come from this library and be freed at most once.
 */
void smv_string_free(char *text);

/**
 * The library version as a static string.
 */
const char *smv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMVERIFY_H */
