#ifndef RATCLOS_H
#define RATCLOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible entry point.
 */
typedef enum RcStatus {
  RC_STATUS_OK = 0,
  RC_STATUS_NULL_POINTER = 1,
  RC_STATUS_INVALID_UTF8 = 2,
  RC_STATUS_PARSE = 3,
  RC_STATUS_RESOURCE_LIMIT = 4,
  RC_STATUS_ZERO_PROBABILITY = 5,
  RC_STATUS_INVALID_ARGUMENT = 6,
  RC_STATUS_INTERNAL = 7,
} RcStatus;

/**
 * Opaque knowledge base with its rank partition precomputed.
 */
typedef struct RcKb RcKb;

/**
 * Outcome of a closure or preferential query. Ranks are `-1` when the
 * formula has no rank.
 */
typedef struct RcQueryResult {
  bool answer;
  int64_t rank_antecedent;
  int64_t rank_refuter;
  uint64_t sat_calls;
} RcQueryResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *rc_last_error(void);

/**
 * Parses a knowledge base in the line-oriented `a |~ b` format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RcStatus rc_kb_parse(const char *text, struct RcKb **out);

/**
 * # Safety
 * `kb` must be NULL or a handle from [`rc_kb_parse`] not yet freed.
 */
void rc_kb_free(struct RcKb *kb);

/**
 * Number of distinct assertions in the base; 0 for NULL.
 *
 * # Safety
 * `kb` must be NULL or a live handle.
 */
size_t rc_kb_len(const struct RcKb *kb);

/**
 * Index of the fixpoint level of the rank partition; 0 for NULL.
 *
 * # Safety
 * `kb` must be NULL or a live handle.
 */
size_t rc_kb_height(const struct RcKb *kb);

/**
 * Rational-closure membership of `assertion`.
 *
 * # Safety
 * `kb` must be a live handle, `assertion` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum RcStatus rc_check(const struct RcKb *kb, const char *assertion, struct RcQueryResult *out);

/**
 * Preferential entailment of `assertion`.
 *
 * # Safety
 * Same contract as [`rc_check`].
 */
enum RcStatus rc_pref(const struct RcKb *kb, const char *assertion, struct RcQueryResult *out);

/**
 * Rank of `formula`; writes `-1` when it has no rank.
 *
 * # Safety
 * `kb` must be a live handle, `formula` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum RcStatus rc_rank(const struct RcKb *kb, const char *formula, int64_t *out);

/**
 * Dump of the closure's ranked model, one `rank <n>: v=0 ...` line per world.
 *
 * # Safety
 * `kb` must be a live handle and `out` a valid pointer. The string written to
 * `out` must be released with [`rc_string_free`].
 */
enum RcStatus rc_model_dump(const struct RcKb *kb, char **out);

/**
 * Searches for a witness of non-entailment. Sets `*entailed` and, when a
 * witness exists, writes its text form to `*text` (NULL otherwise).
 *
 * # Safety
 * `kb` must be a live handle, `assertion` a NUL-terminated string, and
 * `entailed`/`text` valid pointers.
 */
enum RcStatus rc_witness(const struct RcKb *kb, const char *assertion, bool *entailed, char **text);

/**
 * Exact conditional probability of the consequent given the antecedent of
 * `assertion` under the ε-assignment of the closure model, written as a
 * `p/q` string. `epsilon` is a fraction such as `"1/10"`.
 *
 * # Safety
 * `kb` must be a live handle, `epsilon` and `assertion` NUL-terminated
 * strings and `out` a valid pointer. The string written to `out` must be
 * released with [`rc_string_free`].
 */
enum RcStatus rc_eps_probability(const struct RcKb *kb,
                                 const char *epsilon,
                                 const char *assertion,
                                 char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string returned through an out-parameter of this
 * library and not yet freed.
 */
void rc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RATCLOS_H */
