#ifndef TVB_H
#define TVB_H

/* This file is generated by cbindgen from tvb-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum TvbStatus {
  TvbStatus_Ok = 0,
  TvbStatus_NullPointer = 1,
  TvbStatus_InvalidArgument = 2,
  TvbStatus_ParseError = 3,
  TvbStatus_BudgetExceeded = 4,
  TvbStatus_InternalError = 5,
} TvbStatus;

/**
 * Opaque handle to an immutable simplicial complex.
 */
typedef struct TvbComplex {
  uint8_t _private[0];
} TvbComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *tvb_version(void);

/**
 * Message for the most recent failure on this thread, or NULL. The caller
 * frees it with `tvb_string_free`.
 */
char *tvb_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 */
void tvb_string_free(char *s);

/**
 * Frees a complex handle. NULL is ignored.
 */
void tvb_complex_free(struct TvbComplex *handle);

/**
 * Builds the `m x n` chessboard complex into `*out`.
 */
enum TvbStatus tvb_chessboard_new(uint32_t m, uint32_t n, struct TvbComplex **out);

/**
 * Joins two complexes into `*out` (left factor keeps its vertex tags).
 */
enum TvbStatus tvb_complex_join(const struct TvbComplex *left,
                                const struct TvbComplex *right,
                                struct TvbComplex **out);

/**
 * Dimension of the complex (-1 for the empty complex, -2 on NULL).
 */
int64_t tvb_complex_dim(const struct TvbComplex *handle);

/**
 * Copies the f-vector `(f_-1, f_0, ..., f_dim)` into `buf` and stores the
 * entry count in `*written`. Fails with `InvalidArgument` if `cap` is too
 * small (`*written` then holds the required length).
 */
enum TvbStatus tvb_complex_f_vector(const struct TvbComplex *handle,
                                    uint64_t *buf,
                                    size_t cap,
                                    size_t *written);

/**
 * Reduced homology profile of the complex over one coefficient system
 * (`"Q"`, `"Z"`, or `"Z<p>"`), as a JSON string.
 */
enum TvbStatus tvb_complex_homology_json(const struct TvbComplex *handle,
                                         const char *coefficients,
                                         char **out_json);

/**
 * Homological connectivity estimate over a comma-separated coefficient
 * list (empty string = automatic choice), as a JSON string.
 */
enum TvbStatus tvb_complex_connectivity_json(const struct TvbComplex *handle,
                                             const char *coefficients,
                                             char **out_json);

/**
 * Evaluates the rainbow Tverberg guarantee criterion for `(d, r, cards)`
 * and returns the full report as a JSON string.
 */
enum TvbStatus tvb_criterion_json(uint64_t d,
                                  uint64_t r,
                                  const uint64_t *cards,
                                  size_t cards_len,
                                  char **out_json);

/**
 * Searches a JSON configuration (fields `dimension`, `points`, `colors`)
 * for `r` pairwise disjoint rainbow faces with a common hull point.
 * Returns `{"found": ..., "partition": ..., "witness": ...}` as JSON.
 */
enum TvbStatus tvb_find_tverberg_json(const char *config_json, uint64_t r, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TVB_H */
