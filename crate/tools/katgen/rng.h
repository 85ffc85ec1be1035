#ifndef KATGEN_RNG_H
#define KATGEN_RNG_H
#include <stdint.h>
#include <stddef.h>
void randombytes_init(const unsigned char *entropy_input, const unsigned char *personalization);
int PQCLEAN_randombytes(uint8_t *x, size_t xlen);
#endif
