#ifndef LINPP_H
#define LINPP_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the library error set.
 */
typedef enum {
  LinppStatus_Ok = 0,
  LinppStatus_NullArgument = 1,
  LinppStatus_InvalidUtf8 = 2,
  LinppStatus_NonPrime = 3,
  LinppStatus_DegenerateDegree = 4,
  LinppStatus_TowerTooLarge = 5,
  LinppStatus_DivisionByZero = 6,
  LinppStatus_LevelMismatch = 7,
  LinppStatus_BoundExceeded = 8,
  LinppStatus_BothZero = 9,
  LinppStatus_NotCoprime = 10,
  LinppStatus_DuplicateNode = 11,
  LinppStatus_ZeroPolynomial = 12,
  LinppStatus_NotADivisor = 13,
  LinppStatus_NotARoot = 14,
  LinppStatus_HypothesisViolated = 15,
  LinppStatus_PreconditionFailed = 16,
  LinppStatus_KNotUnitValued = 17,
  LinppStatus_InvalidA = 18,
  LinppStatus_InvalidDelta = 19,
  LinppStatus_NoSolution = 20,
  LinppStatus_NotAPermutation = 21,
  LinppStatus_BaseNotPp = 22,
  LinppStatus_BaseNotCpp = 23,
  LinppStatus_HNotCoprime = 24,
  LinppStatus_HConditionFailed = 25,
  LinppStatus_RejectionCapExceeded = 26,
  LinppStatus_UnsupportedDivisor = 27,
  LinppStatus_InvalidInput = 28,
  LinppStatus_JsonError = 29,
  LinppStatus_BufferTooSmall = 30,
} LinppStatus;

/**
 * Opaque inverse-spec handle.
 */
typedef struct LinppInverse LinppInverse;

/**
 * Opaque permutation-spec handle.
 */
typedef struct LinppSpec LinppSpec;

/**
 * Opaque tower handle.
 */
typedef struct LinppTower LinppTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; valid until the next
 * failing call on the same thread. Never free this pointer.
 */
const char *linpp_last_error_message(void);

/**
 * Frees a string returned through a `char **` output.
 *
 * # Safety
 * `s` must have been produced by this library and not freed before.
 */
void linpp_string_free(char *s);

/**
 * Builds the deterministic tower F_p ⊆ F_{p^k} ⊆ F_{q^n}.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
LinppStatus linpp_tower_new(uint64_t p,
                            uint32_t k,
                            uint32_t n,
                            uint64_t enum_bound,
                            LinppTower **out);

/**
 * # Safety
 * `tower` must come from `linpp_tower_new` and not be freed twice.
 */
void linpp_tower_free(LinppTower *tower);

/**
 * Number of elements of F_{q^n} (the value-table length).
 *
 * # Safety
 * Pointers must be valid.
 */
LinppStatus linpp_tower_field_size(const LinppTower *tower, uint64_t *out);

/**
 * Tower description as JSON.
 *
 * # Safety
 * Pointers must be valid; free the output with `linpp_string_free`.
 */
LinppStatus linpp_tower_to_json(const LinppTower *tower, char **out);

/**
 * Factorization of x^n - 1 over F_q as a factor_set JSON artifact.
 *
 * # Safety
 * Pointers must be valid; free the output with `linpp_string_free`.
 */
LinppStatus linpp_factor_to_json(const LinppTower *tower, char **out);

/**
 * Builds a permutation of F_{q^n} from a base permutation `b` of F_q.
 * `b`, `h`, `k` use the compact coefficient syntax; `k` may be null for
 * the constant 1.
 *
 * # Safety
 * Pointers must be valid; free the spec with `linpp_spec_free`.
 */
LinppStatus linpp_construct(const LinppTower *tower,
                            const char *b,
                            const char *h,
                            const char *k,
                            uint64_t seed,
                            LinppSpec **out);

/**
 * Complete-permutation lift with k = 1.
 *
 * # Safety
 * Same contracts as `linpp_construct`.
 */
LinppStatus linpp_construct_cpp(const LinppTower *tower,
                                const char *b,
                                const char *h,
                                uint64_t seed,
                                LinppSpec **out);

/**
 * Twisted-divisor lift: `a` is a compact element of F_q with a^n = 1.
 *
 * # Safety
 * Same contracts as `linpp_construct`.
 */
LinppStatus linpp_construct_variant(const LinppTower *tower,
                                    const char *b,
                                    const char *a,
                                    const char *h,
                                    const char *k,
                                    uint64_t seed,
                                    LinppSpec **out);

/**
 * # Safety
 * `spec` must come from this library and not be freed twice.
 */
void linpp_spec_free(LinppSpec *spec);

/**
 * Parses a pp_spec JSON artifact. `enum_bound` of 0 means the default.
 *
 * # Safety
 * Pointers must be valid; free the spec with `linpp_spec_free`.
 */
LinppStatus linpp_spec_from_json(const char *json, uint64_t enum_bound, LinppSpec **out);

/**
 * # Safety
 * Pointers must be valid; free the output with `linpp_string_free`.
 */
LinppStatus linpp_spec_to_json(const LinppSpec *spec, char **out);

/**
 * General permutation criterion (gcd condition plus reduced-map
 * injectivity).
 *
 * # Safety
 * Pointers must be valid.
 */
LinppStatus linpp_spec_check_criterion(const LinppSpec *spec, bool *out);

/**
 * Brute-force permutation oracle over the whole field.
 *
 * # Safety
 * Pointers must be valid.
 */
LinppStatus linpp_spec_is_permutation(const LinppSpec *spec, bool *out);

/**
 * Writes the full value table (output element indices in canonical order)
 * into `buf`; `len` must be exactly the field size.
 *
 * # Safety
 * `buf` must point to `len` writable u64 slots.
 */
LinppStatus linpp_spec_table(const LinppSpec *spec, uint64_t *buf, uintptr_t len);

/**
 * Inverts a spec whose divisor has the shape (x^n-1)/(x-a).
 *
 * # Safety
 * Pointers must be valid; free the output with `linpp_inverse_free`.
 */
LinppStatus linpp_invert(const LinppSpec *spec, LinppInverse **out);

/**
 * # Safety
 * `inv` must come from this library and not be freed twice.
 */
void linpp_inverse_free(LinppInverse *inv);

/**
 * # Safety
 * Pointers must be valid; free the output with `linpp_string_free`.
 */
LinppStatus linpp_inverse_to_json(const LinppInverse *inv, char **out);

/**
 * Value table of the inverse permutation; `len` must equal the field size.
 *
 * # Safety
 * `buf` must point to `len` writable u64 slots.
 */
LinppStatus linpp_inverse_table(const LinppInverse *inv, uint64_t *buf, uintptr_t len);

/**
 * Exhaustive two-sided round-trip check of a spec/inverse pair.
 *
 * # Safety
 * Pointers must be valid.
 */
LinppStatus linpp_verify_inverse(const LinppSpec *spec, const LinppInverse *inv, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINPP_H */
