#ifndef SOCO_H
#define SOCO_H

/* Generated by cbindgen from crates/soco-ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Problem class generated from a model.
 */
typedef enum SocoKind {
  SOCO_KIND_SSCO = 0,
  SOCO_KIND_SBLO = 1,
  SOCO_KIND_SLO = 2,
} SocoKind;

/*
 Result codes.
 */
typedef enum SocoStatus {
  SOCO_STATUS_OK = 0,
  SOCO_STATUS_NULL_POINTER = 1,
  SOCO_STATUS_INVALID_UTF8 = 2,
  SOCO_STATUS_BUFFER_TOO_SMALL = 3,
  SOCO_STATUS_INVALID_ARGUMENT = 4,
  SOCO_STATUS_PARSE_ERROR = 5,
  SOCO_STATUS_INFEASIBLE_LOAD = 6,
  SOCO_STATUS_INSUFFICIENT_SUPPLY = 7,
  SOCO_STATUS_OUT_OF_BOUNDS = 8,
  SOCO_STATUS_INFEASIBLE = 9,
  SOCO_STATUS_TOO_LARGE = 10,
  SOCO_STATUS_NON_CONVERGED = 11,
  SOCO_STATUS_NUMERICAL_FAILURE = 12,
  SOCO_STATUS_OTHER = 13,
  SOCO_STATUS_PANIC = 14,
} SocoStatus;

/*
 Streaming session of an online algorithm.
 */
typedef struct SocoSession SocoSession;

typedef struct SocoTraceStats {
  double pmr;
  double tpmr;
  double mean_peak_distance;
  double mean_valley_length;
  bool diurnal;
} SocoTraceStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread; empty after a success.

 The pointer stays valid until the next call into the library on this thread.
 */
const char *soco_last_error(void);

/*
 Creates a streaming session.

 `model_json` is a model configuration and `algorithm_json` an algorithm description such
 as `{"alg":"lcp","window":2}`. `samples` is the number of combined prediction profiles.

 # Safety
 Both strings must be NUL-terminated and `out` must be writable.
 */
enum SocoStatus soco_session_new(const char *model_json,
                                 enum SocoKind kind,
                                 const char *algorithm_json,
                                 size_t samples,
                                 uint64_t seed,
                                 struct SocoSession **out);

/*
 Releases a session; null is ignored.

 # Safety
 `session` must come from [`soco_session_new`] and not be used afterwards.
 */
void soco_session_free(struct SocoSession *session);

/*
 Number of slots streamed so far.

 # Safety
 `session` must be a live handle or null.
 */
size_t soco_session_slot(const struct SocoSession *session);

/*
 Streams the next slot and writes its configuration.

 `load` holds one count per load type. `predictions_json` may be null or a JSON array
 `[slot][load type][sample]`. On success `config_len` receives the dimension and `cost`
 the accumulated cost. If `config_cap` is too small nothing is streamed and
 `config_len` still receives the needed length.

 # Safety
 Pointers must be valid for the given lengths; `session` must be a live handle.
 */
enum SocoStatus soco_session_step(struct SocoSession *session,
                                  const double *load,
                                  size_t load_len,
                                  const char *predictions_json,
                                  double *config,
                                  size_t config_cap,
                                  size_t *config_len,
                                  double *cost);

/*
 Solves an instance offline.

 `loads` is row-major with `horizon` rows of `types` counts. `algorithm` is one of
 `brute`, `bcp`, `graph1d`, `graphmd`, `approx` (with `gamma`), `static` or `fractional`.
 The schedule is written row-major into `schedule`; `rows` receives its number of rows
 (one for `static`).

 # Safety
 Pointers must be valid for the given lengths.
 */
enum SocoStatus soco_solve_offline(const char *model_json,
                                   enum SocoKind kind,
                                   const double *loads,
                                   size_t horizon,
                                   size_t types,
                                   const char *algorithm,
                                   double gamma,
                                   double *schedule,
                                   size_t schedule_cap,
                                   size_t *rows,
                                   double *cost);

/*
 Statistics of a uni-typed load series.

 # Safety
 `loads` must hold `len` values and `out` must be writable.
 */
enum SocoStatus soco_trace_stats(const double *loads,
                                 size_t len,
                                 double slot_length,
                                 struct SocoTraceStats *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOCO_H */
