#ifndef NUMFIELD_GCD_H
#define NUMFIELD_GCD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Kind of a gcd outcome.
 */
typedef enum NfgOutcomeKind {
  NFG_OUTCOME_KIND_GCD = 0,
  NFG_OUTCOME_KIND_ZERO_DIVISOR = 1,
} NfgOutcomeKind;

/**
 * Status codes returned by fallible calls.
 */
typedef enum NfgStatus {
  NFG_STATUS_OK = 0,
  NFG_STATUS_NULL_POINTER = 1,
  NFG_STATUS_INVALID_UTF8 = 2,
  NFG_STATUS_PARSE = 3,
  /**
   * Bad tower, option or operand combination.
   */
  NFG_STATUS_INVALID = 4,
  NFG_STATUS_RING_MISMATCH = 5,
  NFG_STATUS_NOT_DIVISIBLE = 6,
  /**
   * Ran out of primes or time.
   */
  NFG_STATUS_EXHAUSTED = 7,
  NFG_STATUS_PANIC = 8,
} NfgStatus;

/**
 * Result of [`nfg_gcd`].
 */
typedef struct NfgOutcome NfgOutcome;

/**
 * A polynomial in the main variable over a ring.
 */
typedef struct NfgPoly NfgPoly;

/**
 * A tower `Q[z_1..z_n]/(m_1..m_n)` with a main variable.
 */
typedef struct NfgRing NfgRing;

/**
 * Options for [`nfg_gcd`]; start from [`nfg_gcd_options_default`].
 */
typedef struct NfgGcdOptions {
  uint32_t prime_bits;
  uint64_t seed;
  bool cofactor;
  /**
   * Reserved prime for the division pre-test, 0 for none.
   */
  uint64_t precheck_prime;
  bool fibonacci_schedule;
  uint32_t threads;
} NfgGcdOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *nfg_last_error(void);

/**
 * Builds a tower from `n_exts` extension polynomials, innermost first.
 *
 * # Safety
 * `exts` must point to `n_exts` NUL-terminated strings (or be null when
 * `n_exts` is 0); `main_var` must be NUL-terminated; `out` must be writable.
 */
enum NfgStatus nfg_ring_new(const char *const *exts,
                            size_t n_exts,
                            const char *main_var,
                            struct NfgRing **out);

/**
 * # Safety
 * `ring` must come from [`nfg_ring_new`] or be null.
 */
void nfg_ring_free(struct NfgRing *ring);

/**
 * Parses a polynomial over `ring`.
 *
 * # Safety
 * `ring` must be valid, `text` NUL-terminated and `out` writable.
 */
enum NfgStatus nfg_poly_parse(const struct NfgRing *ring, const char *text, struct NfgPoly **out);

/**
 * # Safety
 * `poly` must come from this library or be null.
 */
void nfg_poly_free(struct NfgPoly *poly);

/**
 * Degree in the main variable, or -1 for zero.
 *
 * # Safety
 * `poly` must be valid or null.
 */
int64_t nfg_poly_degree(const struct NfgPoly *poly);

/**
 * Text form of `poly`; release with [`nfg_string_free`]. Null on failure.
 *
 * # Safety
 * `poly` must be valid or null.
 */
char *nfg_poly_to_string(const struct NfgPoly *poly);

/**
 * # Safety
 * `s` must come from [`nfg_poly_to_string`] or be null.
 */
void nfg_string_free(char *s);

/**
 * Exact quotient `a / b`; [`NfgStatus::NotDivisible`] when `b` does not divide `a`.
 *
 * # Safety
 * `a`, `b` must be valid and `out` writable.
 */
enum NfgStatus nfg_divide(const struct NfgPoly *a, const struct NfgPoly *b, struct NfgPoly **out);

struct NfgGcdOptions nfg_gcd_options_default(void);

/**
 * Monic gcd of `f1` and `f2` by the modular algorithm.
 *
 * # Safety
 * `f1`, `f2` must be valid; `opts` valid or null for defaults; `out` writable.
 */
enum NfgStatus nfg_gcd(const struct NfgPoly *f1,
                       const struct NfgPoly *f2,
                       const struct NfgGcdOptions *opts,
                       struct NfgOutcome **out);

/**
 * # Safety
 * `o` must be valid.
 */
enum NfgOutcomeKind nfg_outcome_kind(const struct NfgOutcome *o);

/**
 * Extension level of a zero-divisor outcome, 0 for a gcd.
 *
 * # Safety
 * `o` must be valid or null.
 */
size_t nfg_outcome_level(const struct NfgOutcome *o);

/**
 * # Safety
 * `o` must be valid or null.
 */
size_t nfg_outcome_primes_used(const struct NfgOutcome *o);

/**
 * The gcd, or the extension factor for a zero-divisor outcome, as a new polynomial.
 *
 * # Safety
 * `o` must be valid or null. The result is freed with [`nfg_poly_free`].
 */
struct NfgPoly *nfg_outcome_poly(const struct NfgOutcome *o);

/**
 * # Safety
 * `o` must come from [`nfg_gcd`] or be null.
 */
void nfg_outcome_free(struct NfgOutcome *o);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NUMFIELD_GCD_H */
