#ifndef CCRING_H
#define CCRING_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CcrStatus {
  CCR_STATUS_OK = 0,
  CCR_STATUS_NULL_POINTER = 1,
  CCR_STATUS_INVALID_ARGUMENT = 2,
  CCR_STATUS_NOT_SELF_PAIRED = 3,
  CCR_STATUS_PARSE = 4,
  CCR_STATUS_TOO_LARGE = 5,
  CCR_STATUS_INTERNAL = 6,
} CcrStatus;

/**
 * Factor data of one ambient ring (F_{p^m} + uF_{p^m})[x]/(x^N - λ).
 */
typedef struct CcrAmbient CcrAmbient;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ccr_last_error(void);

/**
 * Builds the ring for p, m, s, n and λ. `lambda` holds m little-endian
 * coefficients over F_p; `modulus` is m + 1 coefficients of a monic
 * irreducible, or null for the default.
 *
 * # Safety
 * `lambda` must point to `m` values, `modulus` (if non-null) to `m + 1`,
 * and `out` must be writable.
 */
enum CcrStatus ccr_ambient_new(uint64_t p,
                               uint32_t m,
                               uint32_t s,
                               uint64_t n,
                               const uint32_t *lambda,
                               const uint32_t *modulus,
                               struct CcrAmbient **out);

/**
 * # Safety
 * `h` must come from `ccr_ambient_new` and not be used afterwards.
 */
void ccr_ambient_free(struct CcrAmbient *h);

/**
 * Number of irreducible factors r.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum CcrStatus ccr_num_factors(const struct CcrAmbient *h, size_t *out);

/**
 * Number of codes, as a decimal string.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum CcrStatus ccr_count_codes(const struct CcrAmbient *h, char **out);

/**
 * Number of self-dual codes for λ = nu = ±1, as a decimal string.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum CcrStatus ccr_count_self_dual(const struct CcrAmbient *h, int8_t nu, char **out);

/**
 * Factors, idempotents, pairing and total count as JSON.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum CcrStatus ccr_info_json(const struct CcrAmbient *h, char **out);

/**
 * Dual of a code given as JSON (the format `ccring enumerate` prints).
 *
 * # Safety
 * `code_json` must be a NUL-terminated string and `out` writable.
 */
enum CcrStatus ccr_dual_json(const char *code_json, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ccr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CCRING_H */
