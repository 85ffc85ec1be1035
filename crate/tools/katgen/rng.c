/* AES-256 CTR_DRBG used by the NIST submission-package KAT generators. */
#include <string.h>
#include <stdint.h>
#include <stddef.h>
#include <openssl/evp.h>
#include "rng.h"

static struct {
    unsigned char key[32];
    unsigned char v[16];
    int reseed_counter;
} drbg;

static void aes256_ecb(const unsigned char *key, const unsigned char *in, unsigned char *out) {
    EVP_CIPHER_CTX *ctx = EVP_CIPHER_CTX_new();
    int len;
    EVP_EncryptInit_ex(ctx, EVP_aes_256_ecb(), NULL, key, NULL);
    EVP_CIPHER_CTX_set_padding(ctx, 0);
    EVP_EncryptUpdate(ctx, out, &len, in, 16);
    EVP_CIPHER_CTX_free(ctx);
}

static void increment_v(unsigned char *v) {
    for (int j = 15; j >= 0; j--) {
        if (v[j] == 0xff) {
            v[j] = 0x00;
        } else {
            v[j]++;
            break;
        }
    }
}

static void drbg_update(const unsigned char *provided, unsigned char *key, unsigned char *v) {
    unsigned char temp[48];
    for (int i = 0; i < 3; i++) {
        increment_v(v);
        aes256_ecb(key, v, temp + 16 * i);
    }
    if (provided != NULL) {
        for (int i = 0; i < 48; i++) {
            temp[i] ^= provided[i];
        }
    }
    memcpy(key, temp, 32);
    memcpy(v, temp + 32, 16);
}

void randombytes_init(const unsigned char *entropy_input, const unsigned char *personalization) {
    unsigned char seed_material[48];
    memcpy(seed_material, entropy_input, 48);
    if (personalization) {
        for (int i = 0; i < 48; i++) {
            seed_material[i] ^= personalization[i];
        }
    }
    memset(drbg.key, 0, 32);
    memset(drbg.v, 0, 16);
    drbg_update(seed_material, drbg.key, drbg.v);
    drbg.reseed_counter = 1;
}

int PQCLEAN_randombytes(uint8_t *x, size_t xlen) {
    unsigned char block[16];
    size_t i = 0;
    while (xlen > 0) {
        increment_v(drbg.v);
        aes256_ecb(drbg.key, drbg.v, block);
        if (xlen > 15) {
            memcpy(x + i, block, 16);
            i += 16;
            xlen -= 16;
        } else {
            memcpy(x + i, block, xlen);
            xlen = 0;
        }
    }
    drbg_update(NULL, drbg.key, drbg.v);
    drbg.reseed_counter++;
    return 0;
}
