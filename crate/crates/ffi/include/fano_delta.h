#ifndef FANO_DELTA_H
#define FANO_DELTA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bit flags for [`fd_delta_result_minimizers`].
 */
#define FD_MIN_BASE_DIVISOR 1

#define FD_MIN_V0 2

#define FD_MIN_VINF 4

/**
 * Verdict codes for [`fd_delta_result_verdict`].
 */
#define FD_VERDICT_NONE -1

#define FD_VERDICT_K_SEMISTABLE 0

#define FD_VERDICT_K_UNSTABLE 1

#define FD_VERDICT_INDETERMINATE 2

typedef enum FdStatus {
  FD_STATUS_OK = 0,
  FD_STATUS_PARSE = 2,
  FD_STATUS_DOMAIN = 3,
  FD_STATUS_DISAGREEMENT = 4,
  FD_STATUS_NULL_POINTER = 5,
  FD_STATUS_PANIC = 6,
} FdStatus;

/**
 * Outcome of a bundle, cone or branched-cone computation.
 */
typedef struct FdDeltaResult FdDeltaResult;

/**
 * An exact rational number.
 */
typedef struct FdRational FdRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *fd_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *fd_version(void);

/**
 * Parses `"p/q"`, an integer, or a finite decimal.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be writable.
 */
enum FdStatus fd_rational_parse(const char *text, struct FdRational **out);

/**
 * `"p/q"` (or `"p"`), owned by the handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
const char *fd_rational_to_string(const struct FdRational *r);

/**
 * Nearest double, for display only.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
double fd_rational_to_double(const struct FdRational *r);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void fd_rational_free(struct FdRational *r);

/**
 * `β0(n, r)` for the smooth bundle, `r > 1`.
 *
 * # Safety
 * `r` must be a valid string; `out` must be writable.
 */
enum FdStatus fd_beta_zero(uint32_t n, const char *r, struct FdRational **out);

/**
 * Endpoint `1 - r/n` of the optimal angle interval, `r = 1/λ - 1`.
 *
 * # Safety
 * `lambda` must be a valid string; `out` must be writable.
 */
enum FdStatus fd_optimal_angle_endpoint(uint32_t n, const char *lambda, struct FdRational **out);

/**
 * Bundle delta invariant with boundary `a V0 + b Vinf`; `a` and `b` may be
 * null for zero.
 *
 * # Safety
 * String arguments must be valid or (for `a`, `b`) null; `out` must be
 * writable.
 */
enum FdStatus fd_bundle_delta(uint32_t n,
                              const char *r,
                              const char *delta_v,
                              const char *a,
                              const char *b,
                              struct FdDeltaResult **out);

/**
 * Cone delta invariant with boundary `c Vinf`; `c` may be null for zero.
 *
 * # Safety
 * String arguments must be valid or (for `c`) null; `out` must be writable.
 */
enum FdStatus fd_cone_delta(uint32_t n,
                            const char *r,
                            const char *delta_v,
                            const char *c,
                            struct FdDeltaResult **out);

/**
 * Branched hypersurface cone; `delta_pair` may be null when
 * `n+1 <= d <= n+2`.
 *
 * # Safety
 * `delta_pair` must be null or a valid string; `out` must be writable.
 */
enum FdStatus fd_branched_cone_delta(uint32_t n,
                                     uint32_t k,
                                     uint32_t d,
                                     uint32_t l,
                                     const char *delta_pair,
                                     struct FdDeltaResult **out);

/**
 * Exact value as `"p/q"`, owned by the result.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
const char *fd_delta_result_value(const struct FdDeltaResult *res);

/**
 * Copies the value into a new rational handle.
 *
 * # Safety
 * `res` must be a live handle; `out` must be writable.
 */
enum FdStatus fd_delta_result_value_rational(const struct FdDeltaResult *res,
                                             struct FdRational **out);

/**
 * Bit set of `FD_MIN_*` flags; 0 for a null handle.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
uint32_t fd_delta_result_minimizers(const struct FdDeltaResult *res);

/**
 * Whether the value is only a lower bound.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
bool fd_delta_result_lower_bound_only(const struct FdDeltaResult *res);

/**
 * Whether the cone formula is only a proven upper bound (`r > n+1`).
 *
 * # Safety
 * `res` must be null or a live handle.
 */
bool fd_delta_result_upper_bound_only(const struct FdDeltaResult *res);

/**
 * One of the `FD_VERDICT_*` codes; `FD_VERDICT_NONE` unless the result came
 * from [`fd_branched_cone_delta`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
int32_t fd_delta_result_verdict(const struct FdDeltaResult *res);

/**
 * Compact JSON document (schema "1"), owned by the result.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
const char *fd_delta_result_json(const struct FdDeltaResult *res);

/**
 * Copies the JSON document into a string released by [`fd_string_free`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
char *fd_delta_result_json_copy(const struct FdDeltaResult *res);

/**
 * # Safety
 * `res` must be null or a handle not yet freed.
 */
void fd_delta_result_free(struct FdDeltaResult *res);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void fd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FANO_DELTA_H */
