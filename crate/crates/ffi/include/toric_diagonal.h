#ifndef TORIC_DIAGONAL_H
#define TORIC_DIAGONAL_H

/* Generated by cbindgen from the toric-diagonal-ffi crate. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_NULL_POINTER = 1,
  TD_STATUS_INVALID_UTF8 = 2,
  TD_STATUS_INVALID_INPUT = 3,
  TD_STATUS_RESOURCE_EXHAUSTED = 4,
  TD_STATUS_INTERNAL = 5,
  TD_STATUS_BUFFER_TOO_SMALL = 6,
  TD_STATUS_PANIC = 7,
} TdStatus;

/**
 * A parsed fan.
 */
typedef struct TdFan TdFan;

/**
 * A labeled quotient complex together with the lattice data that produced it.
 */
typedef struct TdPipeline TdPipeline;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the library; valid until the
 * next call on the same thread.
 */
const char *td_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void td_string_free(char *s);

/**
 * Parses a fan from JSON `{"dim", "rays", "max_cones"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum TdStatus td_fan_from_json(const char *json, struct TdFan **out);

/**
 * # Safety
 * `fan` must be null or a handle from [`td_fan_from_json`] that has not been freed.
 */
void td_fan_free(struct TdFan *fan);

/**
 * Fan report as JSON.
 *
 * # Safety
 * `fan` must be a live handle and `out` valid for writes.
 */
enum TdStatus td_fan_check_json(const struct TdFan *fan, char **out);

/**
 * # Safety
 * `fan` must be a live handle and `out` valid for writes.
 */
enum TdStatus td_fan_is_unimodular(const struct TdFan *fan, bool *out);

/**
 * Builds the quotient complex.
 *
 * `epsilon` is a list like `"1/100,0,0,1/100"`, `group` a list of cyclic factors like `"6"`;
 * either may be null. `window` of 0 picks the smallest sound window.
 *
 * # Safety
 * `fan` must be a live handle, the strings null or NUL-terminated, and `out` valid for writes.
 */
enum TdStatus td_pipeline_new(const struct TdFan *fan,
                              const char *epsilon,
                              const char *group,
                              uint64_t window,
                              struct TdPipeline **out);

/**
 * # Safety
 * `p` must be null or a handle from [`td_pipeline_new`] that has not been freed.
 */
void td_pipeline_free(struct TdPipeline *p);

/**
 * Copies the f-vector into `buf`. `len` receives the number of entries; if `cap` is too small
 * nothing is copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `p` must be a live handle, `buf` valid for `cap` writes, `len` valid for writes.
 */
enum TdStatus td_pipeline_f_vector(const struct TdPipeline *p,
                                   uintptr_t *buf,
                                   uintptr_t cap,
                                   uintptr_t *len);

/**
 * The quotient complex as JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum TdStatus td_pipeline_complex_json(const struct TdPipeline *p, char **out);

/**
 * The graded cellular complex as JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum TdStatus td_pipeline_resolution_json(const struct TdPipeline *p, char **out);

/**
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum TdStatus td_pipeline_verify_d_squared(const struct TdPipeline *p, bool *out);

/**
 * `exact` is set when every degree restriction is acyclic in positive dimensions,
 * `resolves_image` when it is also connected.
 *
 * # Safety
 * `p` must be a live handle; `exact` and `resolves_image` valid for writes.
 */
enum TdStatus td_pipeline_exactness(const struct TdPipeline *p, bool *exact, bool *resolves_image);

/**
 * Cokernel report as JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum TdStatus td_pipeline_cokernel_json(const struct TdPipeline *p, uint32_t k_max, char **out);

/**
 * `h⁰` and `h¹` of `O(n)` on `P(a, b)`.
 *
 * # Safety
 * `h0` and `h1` must be valid for writes.
 */
enum TdStatus td_cech_h_dims(int64_t a, int64_t b, int64_t n, uintptr_t *h0, uintptr_t *h1);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TORIC_DIAGONAL_H */
