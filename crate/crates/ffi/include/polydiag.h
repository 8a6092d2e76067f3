#ifndef POLYDIAG_H
#define POLYDIAG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_NULL_POINTER = 1,
  PD_STATUS_INVALID_UTF8 = 2,
  PD_STATUS_VALIDATION = 3,
  PD_STATUS_IDENTITY = 4,
  PD_STATUS_JSON = 5,
  PD_STATUS_PANIC = 6,
} PdStatus;

/**
 * Rendering variable for polynomials.
 */
typedef enum PdVar {
  PD_VAR_U = 0,
  PD_VAR_T = 1,
} PdVar;

/**
 * A chain of set partitions.
 */
typedef struct PdChain PdChain;

/**
 * Memoizing polynomial context for a fixed base dimension `m`.
 */
typedef struct PdHodgeContext PdHodgeContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *pd_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void pd_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *pd_version(void);

/**
 * Number of strata of `X⟨n⟩`, or those of codimension `codim` when
 * `codim >= 0`, as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer to write a string pointer into.
 */
enum PdStatus pd_strata_count(size_t n, int64_t codim, char **out);

/**
 * Number of strata of the Fulton–MacPherson space `X[n]`.
 *
 * # Safety
 * `out` must be a valid pointer to write a string pointer into.
 */
enum PdStatus pd_fm_strata_count(size_t n, char **out);

/**
 * CSV strata table for `n = 2..=max_n`.
 *
 * # Safety
 * `out` must be a valid pointer to write a string pointer into.
 */
enum PdStatus pd_strata_table_csv(size_t max_n, char **out);

/**
 * # Safety
 * `out` must be a valid pointer to write a handle into.
 */
enum PdStatus pd_hodge_context_new(size_t m, struct PdHodgeContext **out);

/**
 * # Safety
 * `ctx` must come from [`pd_hodge_context_new`] and not have been freed.
 */
void pd_hodge_context_free(struct PdHodgeContext *ctx);

/**
 * `U^m_n` rendered as text.
 *
 * # Safety
 * `ctx` must be a live handle and `out` a valid pointer.
 */
enum PdStatus pd_u_poly(const struct PdHodgeContext *ctx, size_t n, enum PdVar var, char **out);

/**
 * Brick polynomial of the partition with parts `parts[0..len]` (any order),
 * closed or open.
 *
 * # Safety
 * `parts` must point to `len` readable values; `ctx` must be a live handle
 * and `out` a valid pointer.
 */
enum PdStatus pd_brick_poly(const struct PdHodgeContext *ctx,
                            const size_t *parts,
                            size_t len,
                            bool open,
                            enum PdVar var,
                            char **out);

/**
 * Runs the open-strata consistency check; on success `*ok` says whether the
 * identity held and `*report` (if non-null) receives the JSON report.
 *
 * # Safety
 * `ctx` must be a live handle; `ok` must be valid; `report` may be null.
 */
enum PdStatus pd_consistency_check(const struct PdHodgeContext *ctx,
                                   size_t n,
                                   bool *ok,
                                   char **report);

/**
 * Parses a chain from `{"n":..,"partitions":[{"n":..,"blocks":[[..]]},..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PdStatus pd_chain_from_json(const char *json, struct PdChain **out);

/**
 * # Safety
 * `chain` must come from this library and not have been freed.
 */
void pd_chain_free(struct PdChain *chain);

/**
 * Length of the chain, i.e. the codimension of its stratum; 0 for null.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
size_t pd_chain_len(const struct PdChain *chain);

/**
 * # Safety
 * `chain` must be a live handle and `out` a valid pointer.
 */
enum PdStatus pd_chain_to_string(const struct PdChain *chain, char **out);

/**
 * The leveled tree of the chain in DOT syntax.
 *
 * # Safety
 * `chain` must be a live handle and `out` a valid pointer.
 */
enum PdStatus pd_chain_tree_dot(const struct PdChain *chain, char **out);

/**
 * Hodge polynomial of the closed or open stratum of `chain`.
 *
 * # Safety
 * `ctx` and `chain` must be live handles and `out` a valid pointer.
 */
enum PdStatus pd_stratum_poly(const struct PdHodgeContext *ctx,
                              const struct PdChain *chain,
                              bool open,
                              enum PdVar var,
                              char **out);

/**
 * Classifies an exponent profile given as JSON; writes
 * `{"chain":..,"tree":..,"nest":..}`.
 *
 * # Safety
 * `profile_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PdStatus pd_classify_json(const char *profile_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYDIAG_H */
