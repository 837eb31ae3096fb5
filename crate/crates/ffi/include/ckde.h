#ifndef CKDE_H
#define CKDE_H

/* Generated by cbindgen from the ckde-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum CkdeStatus {
  // Success.
  CKDE_STATUS_OK = 0,
  // A required pointer argument was NULL.
  CKDE_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  CKDE_STATUS_INVALID_UTF8 = 2,
  // An argument was structurally invalid (bad hex, bad sizes).
  CKDE_STATUS_INVALID_ARGUMENT = 3,
  // A scenario or parameter configuration was rejected.
  CKDE_STATUS_CONFIG_ERROR = 4,
  // A cryptographic operation failed internally.
  CKDE_STATUS_CRYPTO_ERROR = 5,
  // A transcript failed offline verification.
  CKDE_STATUS_VERIFY_FAILED = 6,
} CkdeStatus;

// Opaque handle to a validated pairing parameter set.
typedef struct CkdeParams CkdeParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error on this thread, or NULL when no call has failed yet.
// The pointer is valid until the next failing call on the same thread;
// do not free it.
const char *ckde_last_error(void);

// Frees a string returned by this library. NULL is ignored.
//
// # Safety
// `text` must be a pointer previously returned through one of this
// library's out-parameters and not yet freed.
void ckde_string_free(char *text);

// Deterministically searches for pairing parameters with a `bits`-bit
// prime and writes a new handle to `out_params`.
//
// # Safety
// `out_params` must be a valid writable pointer.
enum CkdeStatus ckde_params_generate(uint64_t bits, uint64_t seed, struct CkdeParams **out_params);

// Builds and validates parameters from lowercase hex p, q, r with
// p + 1 = 12*q*r.
//
// # Safety
// All pointers must be valid; the strings NUL-terminated.
enum CkdeStatus ckde_params_from_parts(const char *p_hex,
                                       const char *q_hex,
                                       const char *r_hex,
                                       struct CkdeParams **out_params);

// Writes a JSON description (p, q, r, cofactor, curve, generator) of the
// parameter set to `out_json`.
//
// # Safety
// `params` must be a live handle from this library; `out_json` writable.
enum CkdeStatus ckde_params_describe(const struct CkdeParams *params, char **out_json);

// Releases a parameter handle. NULL is ignored.
//
// # Safety
// `params` must come from this library and not be freed twice.
void ckde_params_free(struct CkdeParams *params);

// Runs a scenario from its JSON config and writes the JSON-lines
// transcript to `out_transcript`. Identical configs produce byte-identical
// transcripts.
//
// # Safety
// `config_json` must be NUL-terminated; `out_transcript` writable.
enum CkdeStatus ckde_scenario_run(const char *config_json, char **out_transcript);

// Re-verifies every recorded check of a JSON-lines transcript.
// Returns Ok when all checks hold, VerifyFailed otherwise.
//
// # Safety
// `transcript` must be NUL-terminated.
enum CkdeStatus ckde_transcript_verify(const char *transcript);

// Times the four comparison rows (DES, Signature, IDEA, improved) and
// writes the CSV report to `out_csv`. `iterations` must be at least 30.
//
// # Safety
// `out_csv` must be writable.
enum CkdeStatus ckde_bench_csv(uint32_t iterations, uint64_t seed, char **out_csv);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CKDE_H */
