/* C interface for the gsdom dominance library. */

#ifndef GSDOM_H
#define GSDOM_H

/* This file is generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible entry point.
 */
typedef enum GsdomStatus {
  GSDOM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GSDOM_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  GSDOM_STATUS_INVALID_UTF8 = 2,
  /**
   * The input failed validation; see `gsdom_last_error`.
   */
  GSDOM_STATUS_INVALID_INPUT = 3,
  /**
   * The problem is infeasible or inconsistent at the requested margin.
   */
  GSDOM_STATUS_INFEASIBLE = 4,
  /**
   * Internal error; see `gsdom_last_error`.
   */
  GSDOM_STATUS_INTERNAL = 5,
} GsdomStatus;

/**
 * Opaque parsed problem document.
 */
typedef struct GsdomProblem GsdomProblem;

/**
 * Opaque pipeline result.
 */
typedef struct GsdomReport GsdomReport;

/**
 * Pipeline options. Zero `oracle_samples` disables the sampling oracle.
 */
typedef struct GsdomRunOptions {
  /**
   * Optimality-sign tolerance for dominance verdicts.
   */
  double epsilon_opt;
  /**
   * Sampling-oracle sample count per margin level; zero disables.
   */
  uint64_t oracle_samples;
  /**
   * Walk steps between oracle samples.
   */
  uint64_t oracle_burn_in;
  /**
   * Seed for the sampling oracle.
   */
  uint64_t seed;
} GsdomRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: 1e-8 tolerance, oracle disabled, seed 0.
 */
struct GsdomRunOptions gsdom_run_options_default(void);

/**
 * Parse and validate a problem document from JSON text.
 *
 * On success writes a handle to `out` and returns `Ok`; the handle is
 * released with [`gsdom_problem_free`].
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` must be a valid
 * location to store a pointer.
 */
enum GsdomStatus gsdom_problem_parse(const char *json, struct GsdomProblem **out);

/**
 * Release a problem handle. Null is ignored.
 *
 * # Safety
 * `p` must have been returned by [`gsdom_problem_parse`] and not yet freed.
 */
void gsdom_problem_free(struct GsdomProblem *p);

/**
 * Run the pipeline on a parsed problem.
 *
 * `options` may be null for defaults. On success writes a report handle to
 * `out`; release it with [`gsdom_report_free`].
 *
 * # Safety
 * `problem` must be a live handle from [`gsdom_problem_parse`]; `out` must
 * be a valid location to store a pointer.
 */
enum GsdomStatus gsdom_run(const struct GsdomProblem *problem,
                           const struct GsdomRunOptions *options,
                           struct GsdomReport **out);

/**
 * Release a report handle. Null is ignored.
 *
 * # Safety
 * `r` must have been returned by [`gsdom_run`] and not yet freed.
 */
void gsdom_report_free(struct GsdomReport *r);

/**
 * The report as pretty-printed JSON; free with [`gsdom_string_free`].
 *
 * # Safety
 * `r` must be a live report handle.
 */
char *gsdom_report_json(const struct GsdomReport *r);

/**
 * Number of margin levels (and DOT diagrams) in the report.
 *
 * # Safety
 * `r` must be a live report handle.
 */
uintptr_t gsdom_report_dot_count(const struct GsdomReport *r);

/**
 * Margin level `idx`, or NaN when out of range.
 *
 * # Safety
 * `r` must be a live report handle.
 */
double gsdom_report_delta(const struct GsdomReport *r, uintptr_t idx);

/**
 * Maximal consistent margin of the problem's preference system.
 *
 * # Safety
 * `r` must be a live report handle.
 */
double gsdom_report_delta_max(const struct GsdomReport *r);

/**
 * DOT text of the Hasse diagram at margin level `idx`, or null when out of
 * range; free with [`gsdom_string_free`].
 *
 * # Safety
 * `r` must be a live report handle.
 */
char *gsdom_report_dot(const struct GsdomReport *r, uintptr_t idx);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned by a gsdom function and not yet freed.
 */
void gsdom_string_free(char *s);

/**
 * The last error message on this thread, or null when the last call
 * succeeded; free with [`gsdom_string_free`].
 */
char *gsdom_last_error(void);

/**
 * Library version as a static string; do not free.
 */
const char *gsdom_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSDOM_H */
