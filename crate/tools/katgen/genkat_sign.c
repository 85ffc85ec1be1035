/* Writes PQCsignKAT_<sk bytes>.rsp in the submission-package response format. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "api.h"
#include "rng.h"

#define CAT_(a, b) a##b
#define CAT(a, b) CAT_(a, b)
#define KEYPAIR CAT(NS, crypto_sign_keypair)
#define SIGN CAT(NS, crypto_sign)
#define OPEN CAT(NS, crypto_sign_open)
#define PKB CAT(NS, CRYPTO_PUBLICKEYBYTES)
#define SKB CAT(NS, CRYPTO_SECRETKEYBYTES)
#define SIGB CAT(NS, CRYPTO_BYTES)
#define ALG CAT(NS, CRYPTO_ALGNAME)

static void bstr(FILE *fp, const char *s, const unsigned char *a, size_t l) {
    fprintf(fp, "%s", s);
    for (size_t i = 0; i < l; i++) fprintf(fp, "%02X", a[i]);
    if (l == 0) fprintf(fp, "00");
    fprintf(fp, "\n");
}

int main(void) {
    unsigned char entropy[48], seeds[100][48];
    unsigned char *msgs[100];
    unsigned char pk[PKB], sk[SKB];
    char fn[64];
    for (int i = 0; i < 48; i++) entropy[i] = (unsigned char)i;
    randombytes_init(entropy, NULL);
    for (int i = 0; i < 100; i++) {
        PQCLEAN_randombytes(seeds[i], 48);
        size_t mlen = 33 * (i + 1);
        msgs[i] = calloc(mlen, 1);
        PQCLEAN_randombytes(msgs[i], mlen);
    }
    sprintf(fn, "PQCsignKAT_%d.rsp", SKB);
    FILE *fp = fopen(fn, "w");
    fprintf(fp, "# %s\n\n", ALG);
    for (int i = 0; i < 100; i++) {
        size_t mlen = 33 * (i + 1), smlen, mlen1;
        unsigned char *sm = calloc(mlen + SIGB, 1), *m1 = calloc(mlen + SIGB, 1);
        fprintf(fp, "count = %d\n", i);
        bstr(fp, "seed = ", seeds[i], 48);
        fprintf(fp, "mlen = %zu\n", mlen);
        bstr(fp, "msg = ", msgs[i], mlen);
        randombytes_init(seeds[i], NULL);
        KEYPAIR(pk, sk);
        bstr(fp, "pk = ", pk, PKB);
        bstr(fp, "sk = ", sk, SKB);
        SIGN(sm, &smlen, msgs[i], mlen, sk);
        fprintf(fp, "smlen = %zu\n", smlen);
        bstr(fp, "sm = ", sm, smlen);
        fprintf(fp, "\n");
        if (OPEN(m1, &mlen1, sm, smlen, pk) || mlen1 != mlen || memcmp(m1, msgs[i], mlen)) {
            fprintf(stderr, "open failed %d\n", i);
            return 1;
        }
        free(sm); free(m1);
    }
    fclose(fp);
    return 0;
}
