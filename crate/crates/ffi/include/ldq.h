#ifndef LDQ_H
#define LDQ_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LdqErrorCode {
  LDQ_ERROR_CODE_OK = 0,
  LDQ_ERROR_CODE_NULL_ARGUMENT = 1,
  LDQ_ERROR_CODE_INVALID_UTF8 = 2,
  LDQ_ERROR_CODE_WEB = 3,
  LDQ_ERROR_CODE_PARSE = 4,
  LDQ_ERROR_CODE_CRITERION = 5,
  LDQ_ERROR_CODE_SEEDS = 6,
  LDQ_ERROR_CODE_BUDGET_REQUIRED = 7,
  LDQ_ERROR_CODE_PANIC = 8,
} LdqErrorCode;

typedef enum LdqStatus {
  LDQ_STATUS_COMPLETE = 0,
  LDQ_STATUS_BUDGET_EXHAUSTED = 1,
} LdqStatus;

typedef enum LdqStreamEvent {
  /**
   * A new solution was written to the out-parameters.
   */
  LDQ_STREAM_EVENT_SOLUTION = 0,
  /**
   * Execution ended with the complete result.
   */
  LDQ_STREAM_EVENT_COMPLETE = 1,
  /**
   * Execution ended because the budget ran out.
   */
  LDQ_STREAM_EVENT_BUDGET_EXHAUSTED = 2,
  /**
   * The stream already finished.
   */
  LDQ_STREAM_EVENT_END = 3,
  /**
   * Invalid arguments; see `ldq_last_error_message`.
   */
  LDQ_STREAM_EVENT_ERROR = 4,
} LdqStreamEvent;

/**
 * A parsed query.
 */
typedef struct LdqQuery LdqQuery;

/**
 * The result of a finished execution. Solutions are kept in canonical order.
 */
typedef struct LdqReport LdqReport;

/**
 * A streaming execution.
 */
typedef struct LdqStream LdqStream;

/**
 * A Web of Linked Data.
 */
typedef struct LdqWeb LdqWeb;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ldq_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ldq_string_free(char *s);

/**
 * Opens a web file or a generator selector (`gen:numbers`, `gen:chain:N|inf`,
 * `gen:star:N|inf`).
 *
 * # Safety
 * `selector` must be a nul-terminated string; `out` must be writable.
 */
enum LdqErrorCode ldq_web_open(const char *selector, struct LdqWeb **out);

/**
 * Builds a finite web from its JSON description.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum LdqErrorCode ldq_web_from_json(const char *json, struct LdqWeb **out);

/**
 * # Safety
 * `web` must be null or a handle from this library, not yet freed.
 */
void ldq_web_free(struct LdqWeb *web);

/**
 * # Safety
 * `query` must be a nul-terminated string; `out` must be writable.
 */
enum LdqErrorCode ldq_query_parse(const char *query, struct LdqQuery **out);

/**
 * The query in canonical syntax, or null if `query` is null.
 *
 * # Safety
 * `query` must be null or a live handle.
 */
char *ldq_query_to_string(const struct LdqQuery *query);

/**
 * # Safety
 * `query` must be null or a handle from this library, not yet freed.
 */
void ldq_query_free(struct LdqQuery *query);

/**
 * Full-web evaluation. `max_lookups == 0` means unlimited, which fails with
 * `BudgetRequired` on webs that cannot be materialized.
 *
 * # Safety
 * `web` and `query` must be live handles; `out` must be writable.
 */
enum LdqErrorCode ldq_exec_full(const struct LdqWeb *web,
                                const struct LdqQuery *query,
                                uint64_t max_lookups,
                                struct LdqReport **out);

/**
 * Reachability-based evaluation. `seeds` is a comma-separated list of URIs;
 * `max_lookups == 0` means unlimited.
 *
 * # Safety
 * Handles must be live, strings nul-terminated, and `out` writable.
 */
enum LdqErrorCode ldq_exec_reach(const struct LdqWeb *web,
                                 const struct LdqQuery *query,
                                 const char *criterion,
                                 const char *seeds,
                                 uint64_t max_lookups,
                                 struct LdqReport **out);

/**
 * # Safety
 * `report` must be a live handle.
 */
enum LdqStatus ldq_report_status(const struct LdqReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
size_t ldq_report_solution_count(const struct LdqReport *report);

/**
 * Budgeted lookups performed.
 *
 * # Safety
 * `report` must be a live handle.
 */
uint64_t ldq_report_lookups(const struct LdqReport *report);

/**
 * Documents whose data was evaluated.
 *
 * # Safety
 * `report` must be a live handle.
 */
size_t ldq_report_documents(const struct LdqReport *report);

/**
 * # Safety
 * `report` must be a live handle.
 */
uint64_t ldq_report_iterations(const struct LdqReport *report);

/**
 * The canonical encoding of solution `index`, or null if out of range. The
 * pointer is owned by the report.
 *
 * # Safety
 * `report` must be a live handle.
 */
const char *ldq_report_solution(const struct LdqReport *report, size_t index);

/**
 * All solutions, one canonical line each. Release with `ldq_string_free`.
 *
 * # Safety
 * `report` must be a live handle.
 */
char *ldq_report_encoded(const struct LdqReport *report);

/**
 * # Safety
 * `report` must be null or a handle from this library, not yet freed.
 */
void ldq_report_free(struct LdqReport *report);

/**
 * Starts a streaming reachability-based execution. The stream keeps the web
 * alive on its own.
 *
 * # Safety
 * Handles must be live, strings nul-terminated, and `out` writable.
 */
enum LdqErrorCode ldq_stream_open(const struct LdqWeb *web,
                                  const struct LdqQuery *query,
                                  const char *criterion,
                                  const char *seeds,
                                  uint64_t max_lookups,
                                  struct LdqStream **out);

/**
 * Advances the stream. On `Solution`, `*iteration` receives the iteration
 * number and `*solution` a string to release with `ldq_string_free`; either
 * out-pointer may be null.
 *
 * # Safety
 * `stream` must be a live handle; non-null out-pointers must be writable.
 */
enum LdqStreamEvent ldq_stream_next(struct LdqStream *stream, uint64_t *iteration, char **solution);

/**
 * Budgeted lookups performed so far.
 *
 * # Safety
 * `stream` must be a live handle.
 */
uint64_t ldq_stream_lookups(const struct LdqStream *stream);

/**
 * # Safety
 * `stream` must be null or a handle from this library, not yet freed.
 */
void ldq_stream_free(struct LdqStream *stream);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LDQ_H */
