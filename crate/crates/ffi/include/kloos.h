#ifndef KLOOS_H
#define KLOOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. Zero is success.
 */
typedef enum KloosStatus {
  KLOOS_STATUS_OK = 0,
  KLOOS_STATUS_NULL_POINTER = 1,
  KLOOS_STATUS_INVALID_ARGUMENT = 2,
  KLOOS_STATUS_GUARD = 3,
  KLOOS_STATUS_CONSISTENCY = 4,
  KLOOS_STATUS_PANIC = 5,
} KloosStatus;

/**
 * Opaque handle to GF(3^r).
 */
typedef struct KloosField KloosField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *kloos_last_error(void);

/**
 * Builds GF(3^r). `modulus` holds `modulus_len` coefficients, constant term
 * first; pass NULL for the built-in modulus of degree r.
 *
 * # Safety
 * `modulus` must point to `modulus_len` readable bytes or be NULL; `out`
 * must be writable.
 */
enum KloosStatus kloos_field_new(uint32_t r,
                                 const uint8_t *modulus,
                                 uintptr_t modulus_len,
                                 struct KloosField **out);

/**
 * # Safety
 * `field` must come from [`kloos_field_new`] and not be used afterwards.
 */
void kloos_field_free(struct KloosField *field);

/**
 * q = 3^r, or 0 for a NULL handle.
 *
 * # Safety
 * `field` must be a live handle or NULL.
 */
uint32_t kloos_field_q(const struct KloosField *field);

/**
 * Absolute trace of the element with index `x` (Σ c_i 3^i).
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum KloosStatus kloos_field_trace(const struct KloosField *field, uint32_t x, uint8_t *out);

/**
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum KloosStatus kloos_field_is_square(const struct KloosField *field, uint32_t x, bool *out);

/**
 * K(λ; a) for the element with index `a`.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum KloosStatus kloos_kloosterman(const struct KloosField *field, uint32_t a, int64_t *out);

/**
 * SK^h as a decimal string.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum KloosStatus kloos_sk_moment(const struct KloosField *field, uint32_t h, char **out);

/**
 * MK^h as a decimal string.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum KloosStatus kloos_mk_moment(const struct KloosField *field, uint32_t h, char **out);

/**
 * `{"A":..,"B":..,"N":..}` for a family name such as `"DC2+"`.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be writable.
 */
enum KloosStatus kloos_family_constants_json(const char *family,
                                             uint32_t n,
                                             uint64_t q,
                                             char **out);

/**
 * The moment series recovered from one family's code, as JSON.
 *
 * # Safety
 * `field` must be a live handle; `family` a NUL-terminated string; `out`
 * writable.
 */
enum KloosStatus kloos_sk_via_pless_json(const struct KloosField *field,
                                         const char *family,
                                         uint32_t n,
                                         uint32_t h_max,
                                         char **out);

/**
 * Full verification report as JSON. `*passed` is set when it is non-NULL.
 *
 * # Safety
 * `field` must be a live handle; `out` writable; `passed` writable or NULL.
 */
enum KloosStatus kloos_verify_json(const struct KloosField *field,
                                   uint32_t n_max,
                                   uint32_t h_max,
                                   bool *passed,
                                   char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void kloos_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* KLOOS_H */
