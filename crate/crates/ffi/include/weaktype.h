#ifndef WEAKTYPE_H
#define WEAKTYPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum WtStatus {
  WT_STATUS_OK = 0,
  WT_STATUS_NULL_POINTER = 1,
  WT_STATUS_INVALID_UTF8 = 2,
  WT_STATUS_PARSE = 3,
  WT_STATUS_PARAMETER = 4,
  WT_STATUS_DOMAIN = 5,
  // The budget ran out; outputs still hold the best enclosure reached.
  WT_STATUS_INCONCLUSIVE = 6,
  WT_STATUS_SIZE = 7,
  WT_STATUS_IO = 8,
  WT_STATUS_PANIC = 9,
} WtStatus;

// Outcome of a certified check.
typedef enum WtVerdict {
  WT_VERDICT_PASS = 0,
  WT_VERDICT_FAIL = 1,
  WT_VERDICT_INCONCLUSIVE = 2,
} WtVerdict;

// Opaque piecewise function.
typedef struct WtFunction WtFunction;

// Certified enclosure `lo <= value <= hi`, doubles rounded outward.
typedef struct WtEnclosure {
  double lo;
  double hi;
} WtEnclosure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread. Valid until the next failing call on
// the same thread; do not free.
const char *wt_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void wt_string_free(char *s);

// Builds a function from a selector such as `"F:10:1"` or `"g:3:2"`.
//
// # Safety
// `selector` must be a NUL-terminated string, `out` writable.
enum WtStatus wt_function_from_selector(const char *selector, struct WtFunction **out);

// Builds a function from its JSON segment list.
//
// # Safety
// `json` must be a NUL-terminated string, `out` writable.
enum WtStatus wt_function_from_json(const char *json, struct WtFunction **out);

// Serializes a function to JSON; free the result with `wt_string_free`.
//
// # Safety
// `f` must be a live handle, `out` writable.
enum WtStatus wt_function_to_json(const struct WtFunction *f, char **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `f` must come from this library and not have been freed.
void wt_function_free(struct WtFunction *f);

// Exact value at `t` in (0, 1], written as `"p/q"`.
//
// # Safety
// `f` must be a live handle, `t` a NUL-terminated string, `out` writable.
enum WtStatus wt_function_eval(const struct WtFunction *f, const char *t, char **out);

// Encloses the weak-L1 quasi-norm to relative tolerance `tol` (a decimal
// or `p/q` string). `budget == 0` keeps the default evaluation budget.
// `enclosure` and `exact` (`"lo_p/lo_q,hi_p/hi_q"`) may each be null.
//
// # Safety
// `f` must be a live handle, `tol` a NUL-terminated string, outputs null or writable.
enum WtStatus wt_weak_norm(const struct WtFunction *f,
                           const char *tol,
                           uint64_t budget,
                           struct WtEnclosure *enclosure,
                           char **exact);

// Encloses the decreasing rearrangement at `t` in (0, 1).
//
// # Safety
// As for `wt_weak_norm`; `t` must be a NUL-terminated string.
enum WtStatus wt_rearrangement_at(const struct WtFunction *f,
                                  const char *t,
                                  const char *tol,
                                  uint64_t budget,
                                  struct WtEnclosure *enclosure,
                                  char **exact);

// Encloses the measure of `{|f| > lambda}`.
//
// # Safety
// As for `wt_weak_norm`; `lambda` must be a NUL-terminated string.
enum WtStatus wt_distribution(const struct WtFunction *f,
                              const char *lambda,
                              const char *tol,
                              uint64_t budget,
                              struct WtEnclosure *enclosure,
                              char **exact);

// Runs the sandwich check for base `n`. `signs` is `"all"` or `"sample:K"`.
// The JSON report, if `report_json` is non-null, must be freed with
// `wt_string_free`.
//
// # Safety
// `tol` and `signs` must be NUL-terminated strings, outputs null or writable.
enum WtStatus wt_verify_lemma(uint64_t n,
                              const char *tol,
                              const char *signs,
                              uint64_t seed,
                              enum WtVerdict *verdict,
                              char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEAKTYPE_H */
