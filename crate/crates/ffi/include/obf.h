#ifndef OBF_H
#define OBF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum ObfError {
  OBF_ERROR_OK = 0,
  OBF_ERROR_NULL_POINTER = 1,
  OBF_ERROR_INVALID_ARGUMENT = 2,
  OBF_ERROR_INVALID_UTF8 = 3,
  OBF_ERROR_PARSE_FAILED = 4,
  OBF_ERROR_SOLVER_FAILED = 5,
  OBF_ERROR_PANICKED = 6,
} ObfError;

/**
 * Outcome recorded in a certificate.
 */
typedef enum ObfStatus {
  OBF_STATUS_SOLVED = 0,
  OBF_STATUS_NO_SOLUTION = 1,
  OBF_STATUS_UNSUPPORTED = 2,
} ObfStatus;

/**
 * Opaque certificate handle.
 */
typedef struct ObfCertificate ObfCertificate;

/**
 * Classification of an odd prime. Fields guarded by a `has_` flag are
 * meaningful only when that flag is set.
 */
typedef struct ObfClassification {
  uint64_t p;
  uint8_t residue_mod_6;
  uint8_t residue_mod_8;
  bool has_cube_status;
  bool two_is_cube;
  bool three_is_cube;
  bool six_is_cube;
  bool has_t_signature;
  uint8_t t_signature[2];
  bool has_quartic_run_witness;
  uint64_t quartic_run_witness;
  bool has_mixed_run_length;
  uint64_t mixed_run_length;
  bool mixed_class;
  bool pm123_class;
  bool pm134_class;
} ObfClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *obf_last_error(void);

/**
 * Classifies the odd prime `p`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `ObfClassification`.
 */
enum ObfError obf_classify(uint64_t p, struct ObfClassification *out);

/**
 * Solves the Oberwolfach problem for the cycle lengths `cycles[0..len]`.
 * A `budget` of 0 selects the default search budget.
 *
 * # Safety
 * `cycles` must point to `len` readable integers and `out` to a writable
 * handle slot. On success `*out` owns a new certificate.
 */
enum ObfError obf_solve_op(const uint32_t *cycles,
                           size_t len,
                           uint64_t budget,
                           struct ObfCertificate **out);

/**
 * # Safety
 * `cert` must be a live handle and `out` writable.
 */
enum ObfError obf_certificate_status(const struct ObfCertificate *cert, enum ObfStatus *out);

/**
 * Serialises a certificate to the text file format. The string written to
 * `*out` must be released with [`obf_string_free`].
 *
 * # Safety
 * `cert` must be a live handle and `out` writable.
 */
enum ObfError obf_certificate_to_json(const struct ObfCertificate *cert, char **out);

/**
 * Parses certificate text into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum ObfError obf_certificate_from_json(const char *json, struct ObfCertificate **out);

/**
 * Checks a certificate. `*valid` receives the verdict; when it is false,
 * [`obf_last_error`] names the failing check.
 *
 * # Safety
 * `cert` must be a live handle and `valid` writable.
 */
enum ObfError obf_verify(const struct ObfCertificate *cert, bool *valid);

/**
 * Parses and checks certificate text in one call.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `valid` writable.
 */
enum ObfError obf_verify_json(const char *json, bool *valid);

/**
 * # Safety
 * `cert` must be null or a handle not yet freed.
 */
void obf_certificate_free(struct ObfCertificate *cert);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void obf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OBF_H */
