#ifndef BDCODES_H
#define BDCODES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `mode` values for [`bd_code_verify`].
 */
#define BD_VERIFY_SPIN 0

#define BD_VERIFY_DENSE 1

#define BD_VERIFY_SYMMETRIC 2

/**
 * Result of every call.
 */
typedef enum BdStatus {
  BD_STATUS_OK = 0,
  BD_STATUS_INVALID_INPUT = 1,
  BD_STATUS_NULL_POINTER = 2,
  BD_STATUS_NOT_FOUND = 3,
  BD_STATUS_VERIFY_FAILED = 4,
  BD_STATUS_RESOURCE_LIMIT = 5,
  BD_STATUS_INTERNAL = 6,
  BD_STATUS_PANIC = 7,
} BdStatus;

/**
 * Opaque code handle.
 */
typedef struct BdCode BdCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *bd_last_error_message(void);

/**
 * Reduced condition counts by summation.
 */
enum BdStatus bd_count_conditions(uint32_t b,
                                  uint32_t a,
                                  uint32_t d,
                                  uint64_t *on_diag,
                                  uint64_t *off_diag);

/**
 * Total reduced condition count from the closed form.
 */
enum BdStatus bd_count_conditions_closed(uint32_t b, uint32_t a, uint32_t d, uint64_t *nu);

/**
 * Predicted code length `n` at odd distance `d`.
 */
enum BdStatus bd_predicted_length(uint32_t b, uint32_t a, uint32_t d, size_t *n);

/**
 * Multiplicity of `delta_a` in spin `twice_j / 2`.
 */
enum BdStatus bd_multiplicity(uint32_t b, uint32_t a, int64_t twice_j, size_t *mu);

/**
 * The `((2b+3, 2, 3))` closed-form code.
 */
enum BdStatus bd_code_family1(uint32_t b, struct BdCode **code);

/**
 * The `((2^r+3, 2, 3, Q^(r)))` code.
 */
enum BdStatus bd_code_family2(uint32_t r, struct BdCode **code);

/**
 * Numerical search at the predicted spin. `BD_STATUS_NOT_FOUND` when no
 * restart reaches the `1e-12` threshold.
 */
enum BdStatus bd_code_search(uint32_t b,
                             uint32_t a,
                             uint32_t d,
                             size_t restarts,
                             uint64_t seed,
                             struct BdCode **code);

/**
 * Parses a code JSON document.
 */
enum BdStatus bd_code_from_json(const char *json, struct BdCode **code);

/**
 * Serializes a code; release the string with [`bd_string_free`].
 */
enum BdStatus bd_code_to_json(const struct BdCode *code, char **json);

/**
 * Number of physical qubits.
 */
enum BdStatus bd_code_qubits(const struct BdCode *code, size_t *n);

/**
 * Declared distance.
 */
enum BdStatus bd_code_distance(const struct BdCode *code, uint32_t *d);

/**
 * Writes the `|0>` amplitudes on Dicke weights `0..=n` (mirrored
 * labeling) into `buf`, which must hold `n + 1` doubles.
 */
enum BdStatus bd_code_amplitudes(const struct BdCode *code, double *buf, size_t len);

/**
 * Knill-Laflamme check at distance `d`; `mode` is one of the
 * `BD_VERIFY_*` constants. `BD_STATUS_OK` with `*pass = 0`
 * means the check ran and failed.
 */
enum BdStatus bd_code_verify(const struct BdCode *code,
                             uint32_t d,
                             uint32_t mode,
                             double tolerance,
                             double *max_residual,
                             bool *pass);

/**
 * Releases a handle; null is ignored.
 */
void bd_code_free(struct BdCode *code);

/**
 * Releases a string returned by the library; null is ignored.
 */
void bd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BDCODES_H */
