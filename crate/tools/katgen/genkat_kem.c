/* Writes PQCkemKAT_<sk bytes>.rsp in the submission-package response format. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "api.h"
#include "rng.h"

#define CAT_(a, b) a##b
#define CAT(a, b) CAT_(a, b)
#define KEYPAIR CAT(NS, crypto_kem_keypair)
#define ENC CAT(NS, crypto_kem_enc)
#define DEC CAT(NS, crypto_kem_dec)
#define PKB CAT(NS, CRYPTO_PUBLICKEYBYTES)
#define SKB CAT(NS, CRYPTO_SECRETKEYBYTES)
#define CTB CAT(NS, CRYPTO_CIPHERTEXTBYTES)
#define SSB CAT(NS, CRYPTO_BYTES)
#define ALG CAT(NS, CRYPTO_ALGNAME)

static void bstr(FILE *fp, const char *s, const unsigned char *a, size_t l) {
    fprintf(fp, "%s", s);
    for (size_t i = 0; i < l; i++) fprintf(fp, "%02X", a[i]);
    if (l == 0) fprintf(fp, "00");
    fprintf(fp, "\n");
}

int main(void) {
    unsigned char entropy[48], seeds[100][48];
    unsigned char pk[PKB], sk[SKB], ct[CTB], ss[SSB], ss1[SSB];
    char fn[64];
    for (int i = 0; i < 48; i++) entropy[i] = (unsigned char)i;
    randombytes_init(entropy, NULL);
    for (int i = 0; i < 100; i++) PQCLEAN_randombytes(seeds[i], 48);
    sprintf(fn, "PQCkemKAT_%d.rsp", SKB);
    FILE *fp = fopen(fn, "w");
    fprintf(fp, "# %s\n\n", ALG);
    for (int i = 0; i < 100; i++) {
        fprintf(fp, "count = %d\n", i);
        bstr(fp, "seed = ", seeds[i], 48);
        randombytes_init(seeds[i], NULL);
        KEYPAIR(pk, sk);
        bstr(fp, "pk = ", pk, PKB);
        bstr(fp, "sk = ", sk, SKB);
        ENC(ct, ss, pk);
        bstr(fp, "ct = ", ct, CTB);
        bstr(fp, "ss = ", ss, SSB);
        fprintf(fp, "\n");
        DEC(ss1, ct, sk);
        if (memcmp(ss, ss1, SSB)) { fprintf(stderr, "mismatch %d\n", i); return 1; }
    }
    fclose(fp);
    return 0;
}
