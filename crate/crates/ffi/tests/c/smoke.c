#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pqbench.h"

#define CHECK(expr)                                                        \
  do {                                                                     \
    PqbStatus s_ = (expr);                                                 \
    if (s_ != PQB_STATUS_OK) {                                             \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, pqb_status_message(s_)); \
      return 1;                                                            \
    }                                                                      \
  } while (0)

static int kem_roundtrip(uint32_t level) {
  PqbKem *kem = NULL;
  CHECK(pqb_kem_new(level, PQB_BACKEND_REFERENCE, &kem));
  size_t pk_len = pqb_kem_public_key_bytes(kem);
  size_t sk_len = pqb_kem_secret_key_bytes(kem);
  size_t ct_len = pqb_kem_ciphertext_bytes(kem);
  uint8_t *pk = malloc(pk_len), *sk = malloc(sk_len), *ct = malloc(ct_len);
  uint8_t ss_a[PQB_SHARED_SECRET_BYTES], ss_b[PQB_SHARED_SECRET_BYTES];
  CHECK(pqb_kem_keypair(kem, pk, pk_len, sk, sk_len));
  CHECK(pqb_kem_encapsulate(kem, pk, pk_len, ct, ct_len, ss_a));
  CHECK(pqb_kem_decapsulate(kem, sk, sk_len, ct, ct_len, ss_b));
  int bad = memcmp(ss_a, ss_b, sizeof ss_a) != 0;
  free(pk);
  free(sk);
  free(ct);
  pqb_kem_free(kem);
  return bad;
}

static int sig_roundtrip(uint32_t level) {
  PqbSig *dsa = NULL;
  CHECK(pqb_sig_new(level, PQB_BACKEND_REFERENCE, &dsa));
  size_t pk_len = pqb_sig_public_key_bytes(dsa);
  size_t sk_len = pqb_sig_secret_key_bytes(dsa);
  size_t sig_len = pqb_sig_signature_bytes(dsa);
  uint8_t *pk = malloc(pk_len), *sk = malloc(sk_len), *sig = malloc(sig_len);
  const uint8_t msg[] = "attack at dawn";
  CHECK(pqb_sig_keypair(dsa, pk, pk_len, sk, sk_len));
  CHECK(pqb_sig_sign(dsa, sk, sk_len, msg, sizeof msg, NULL, sig, sig_len));
  CHECK(pqb_sig_verify(dsa, pk, pk_len, msg, sizeof msg, sig, sig_len));
  sig[0] ^= 1;
  int bad = pqb_sig_verify(dsa, pk, pk_len, msg, sizeof msg, sig, sig_len) != PQB_STATUS_VERIFY_FAILED;
  free(pk);
  free(sk);
  free(sig);
  pqb_sig_free(dsa);
  return bad;
}

int main(void) {
  const uint32_t kem_levels[] = {512, 768, 1024};
  const uint32_t sig_levels[] = {2, 3, 5};
  for (int i = 0; i < 3; i++) {
    if (kem_roundtrip(kem_levels[i]) || sig_roundtrip(sig_levels[i])) {
      return 1;
    }
  }
  PqbKem *kem = NULL;
  if (pqb_kem_new(1000, PQB_BACKEND_REFERENCE, &kem) != PQB_STATUS_INVALID_ARGUMENT || kem != NULL) {
    return 1;
  }
  puts("ok");
  return 0;
}
