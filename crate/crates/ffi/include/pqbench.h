#ifndef PQBENCH_H
#define PQBENCH_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Byte length of a Kyber shared secret.
 */
#define PQB_SHARED_SECRET_BYTES 32

/**
 * Byte length of every seed and of the hedging randomness.
 */
#define PQB_SEED_BYTES 32

/**
 * Implementation of the lattice arithmetic. Both produce identical bytes.
 */
typedef enum {
  PQB_BACKEND_REFERENCE = 0,
  PQB_BACKEND_ACCELERATED = 1,
} PqbBackend;

/**
 * Result of every fallible call.
 */
typedef enum {
  PQB_STATUS_OK = 0,
  PQB_STATUS_NULL_POINTER = 1,
  PQB_STATUS_INVALID_LENGTH = 2,
  PQB_STATUS_INVALID_ARGUMENT = 3,
  PQB_STATUS_BACKEND_UNAVAILABLE = 4,
  PQB_STATUS_REJECTION_LIMIT = 5,
  PQB_STATUS_VERIFY_FAILED = 6,
  PQB_STATUS_INTERNAL = 7,
} PqbStatus;

/**
 * Kyber at one level on one backend.
 */
typedef struct PqbKem PqbKem;

/**
 * Dilithium at one level on one backend.
 */
typedef struct PqbSig PqbSig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of `status`.
 */
const char *pqb_status_message(PqbStatus status);

/**
 * True when the accelerated backend can run on this CPU.
 */
bool pqb_accelerated_available(void);

/**
 * Creates a Kyber handle for `level` 512, 768 or 1024.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
PqbStatus pqb_kem_new(uint32_t level, PqbBackend backend, PqbKem **out);

/**
 * Releases a handle from `pqb_kem_new`. Null is ignored.
 *
 * # Safety
 * `kem` must be null or a handle not yet freed.
 */
void pqb_kem_free(PqbKem *kem);

/**
 * # Safety
 * `kem` must be a live handle.
 */
size_t pqb_kem_public_key_bytes(const PqbKem *kem);

/**
 * # Safety
 * `kem` must be a live handle.
 */
size_t pqb_kem_secret_key_bytes(const PqbKem *kem);

/**
 * # Safety
 * `kem` must be a live handle.
 */
size_t pqb_kem_ciphertext_bytes(const PqbKem *kem);

/**
 * Deterministic key pair from the 32-byte seeds `d` and `z`.
 *
 * # Safety
 * Pointers must be valid for their stated lengths; `d` and `z` for 32 bytes.
 */
PqbStatus pqb_kem_keypair_derand(const PqbKem *kem,
                                 const uint8_t *d,
                                 const uint8_t *z,
                                 uint8_t *pk,
                                 size_t pk_len,
                                 uint8_t *sk,
                                 size_t sk_len);

/**
 * Key pair from operating-system randomness.
 *
 * # Safety
 * Pointers must be valid for their stated lengths.
 */
PqbStatus pqb_kem_keypair(const PqbKem *kem,
                          uint8_t *pk,
                          size_t pk_len,
                          uint8_t *sk,
                          size_t sk_len);

/**
 * Deterministic encapsulation with the 32-byte coins `m`; `ss` receives
 * `PQB_SHARED_SECRET_BYTES`.
 *
 * # Safety
 * Pointers must be valid for their stated lengths.
 */
PqbStatus pqb_kem_encapsulate_derand(const PqbKem *kem,
                                     const uint8_t *pk,
                                     size_t pk_len,
                                     const uint8_t *m,
                                     uint8_t *ct,
                                     size_t ct_len,
                                     uint8_t *ss);

/**
 * Encapsulation with coins from operating-system randomness.
 *
 * # Safety
 * Pointers must be valid for their stated lengths.
 */
PqbStatus pqb_kem_encapsulate(const PqbKem *kem,
                              const uint8_t *pk,
                              size_t pk_len,
                              uint8_t *ct,
                              size_t ct_len,
                              uint8_t *ss);

/**
 * Recovers the shared secret. A well-sized but invalid ciphertext still
 * succeeds and yields the implicit-rejection secret.
 *
 * # Safety
 * Pointers must be valid for their stated lengths.
 */
PqbStatus pqb_kem_decapsulate(const PqbKem *kem,
                              const uint8_t *sk,
                              size_t sk_len,
                              const uint8_t *ct,
                              size_t ct_len,
                              uint8_t *ss);

/**
 * Creates a Dilithium handle for `level` 2, 3 or 5.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
PqbStatus pqb_sig_new(uint32_t level, PqbBackend backend, PqbSig **out);

/**
 * Releases a handle from `pqb_sig_new`. Null is ignored.
 *
 * # Safety
 * `sig` must be null or a handle not yet freed.
 */
void pqb_sig_free(PqbSig *sig);

/**
 * # Safety
 * `sig` must be a live handle.
 */
size_t pqb_sig_public_key_bytes(const PqbSig *sig);

/**
 * # Safety
 * `sig` must be a live handle.
 */
size_t pqb_sig_secret_key_bytes(const PqbSig *sig);

/**
 * # Safety
 * `sig` must be a live handle.
 */
size_t pqb_sig_signature_bytes(const PqbSig *sig);

/**
 * Deterministic key pair from a 32-byte seed.
 *
 * # Safety
 * Pointers must be valid for their stated lengths; `seed` for 32 bytes.
 */
PqbStatus pqb_sig_keypair_derand(const PqbSig *sig,
                                 const uint8_t *seed,
                                 uint8_t *pk,
                                 size_t pk_len,
                                 uint8_t *sk,
                                 size_t sk_len);

/**
 * Key pair from operating-system randomness.
 *
 * # Safety
 * Pointers must be valid for their stated lengths.
 */
PqbStatus pqb_sig_keypair(const PqbSig *sig,
                          uint8_t *pk,
                          size_t pk_len,
                          uint8_t *sk,
                          size_t sk_len);

/**
 * Signs `msg`. With `rnd` null the signature is deterministic; otherwise the
 * 32 bytes at `rnd` hedge the mask seed.
 *
 * # Safety
 * Pointers must be valid for their stated lengths; `rnd` null or 32 bytes.
 */
PqbStatus pqb_sig_sign(const PqbSig *sig,
                       const uint8_t *sk,
                       size_t sk_len,
                       const uint8_t *msg,
                       size_t msg_len,
                       const uint8_t *rnd,
                       uint8_t *out,
                       size_t out_len);

/**
 * `PQB_STATUS_OK` for a valid signature, `PQB_STATUS_VERIFY_FAILED` for an
 * invalid one.
 *
 * # Safety
 * Pointers must be valid for their stated lengths.
 */
PqbStatus pqb_sig_verify(const PqbSig *sig,
                         const uint8_t *pk,
                         size_t pk_len,
                         const uint8_t *msg,
                         size_t msg_len,
                         const uint8_t *signature,
                         size_t signature_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PQBENCH_H */
