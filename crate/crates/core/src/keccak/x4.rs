//! Four independent Keccak-f[1600] instances in AVX2 registers, one instance
//! per 64-bit lane. Used to run four SHAKE streams of equal input length at
//! once during matrix expansion and noise sampling.

use std::arch::x86_64::*;

use super::round::{round, Lane};
use super::{ROUND_CONSTANTS, SHAKE_DOMAIN};
use crate::arch::Avx2;

#[derive(Clone, Copy)]
pub(crate) struct StateX4 {
    lanes: [__m256i; 25],
}

impl Lane for __m256i {
    #[inline(always)]
    fn xor(self, other: Self) -> Self {
        // SAFETY: only reached from inside `permute_x4`, which requires AVX2.
        unsafe { _mm256_xor_si256(self, other) }
    }

    #[inline(always)]
    fn andnot(self, other: Self) -> Self {
        // SAFETY: as above.
        unsafe { _mm256_andnot_si256(self, other) }
    }

    #[inline(always)]
    fn rotl<const LEFT: i32, const RIGHT: i32>(self) -> Self {
        // SAFETY: as above.
        unsafe {
            match LEFT {
                8 => _mm256_shuffle_epi8(
                    self,
                    _mm256_setr_epi8(
                        7, 0, 1, 2, 3, 4, 5, 6, 15, 8, 9, 10, 11, 12, 13, 14, 7, 0, 1, 2, 3, 4, 5, 6, 15, 8, 9, 10, 11,
                        12, 13, 14,
                    ),
                ),
                56 => _mm256_shuffle_epi8(
                    self,
                    _mm256_setr_epi8(
                        1, 2, 3, 4, 5, 6, 7, 0, 9, 10, 11, 12, 13, 14, 15, 8, 1, 2, 3, 4, 5, 6, 7, 0, 9, 10, 11, 12, 13,
                        14, 15, 8,
                    ),
                ),
                _ => _mm256_or_si256(_mm256_slli_epi64::<LEFT>(self), _mm256_srli_epi64::<RIGHT>(self)),
            }
        }
    }
}

#[target_feature(enable = "avx2")]
unsafe fn permute_x4(a: &mut [__m256i; 25]) {
    for rc in ROUND_CONSTANTS {
        round(a, _mm256_set1_epi64x(rc as i64));
    }
}

impl StateX4 {
    /// Absorbs four equal-length single-block inputs with SHAKE padding. The
    /// permutation is deferred to the first [`StateX4::squeeze_block`].
    pub(crate) fn absorb_shake(_t: Avx2, rate: usize, inputs: [&[u8]; 4]) -> Self {
        let len = inputs[0].len();
        assert!(inputs.iter().all(|i| i.len() == len) && len < rate);
        let mut words = [[0u64; 25]; 4];
        for (w, input) in words.iter_mut().zip(inputs) {
            let mut block = [0u8; 200];
            block[..len].copy_from_slice(input);
            block[len] ^= SHAKE_DOMAIN;
            block[rate - 1] ^= 0x80;
            for (lane, chunk) in w.iter_mut().zip(block.chunks_exact(8)) {
                *lane = u64::from_le_bytes(chunk.try_into().unwrap());
            }
        }
        // SAFETY: the Avx2 token proves the feature is present.
        unsafe {
            let mut lanes = [_mm256_setzero_si256(); 25];
            for (i, l) in lanes.iter_mut().enumerate() {
                *l = _mm256_set_epi64x(
                    words[3][i] as i64,
                    words[2][i] as i64,
                    words[1][i] as i64,
                    words[0][i] as i64,
                );
            }
            StateX4 { lanes }
        }
    }

    /// Permutes, then copies the new block (`rate` bytes) of each instance
    /// into `outs`.
    pub(crate) fn squeeze_block(&mut self, _t: Avx2, rate: usize, outs: [&mut [u8]; 4]) {
        let mut tmp = [[0u64; 4]; 25];
        // SAFETY: the Avx2 token proves the feature is present.
        unsafe {
            permute_x4(&mut self.lanes);
            for i in 0..rate / 8 {
                _mm256_storeu_si256(tmp[i].as_mut_ptr() as *mut __m256i, self.lanes[i]);
            }
        }
        for (j, out) in outs.into_iter().enumerate() {
            for i in 0..rate / 8 {
                out[8 * i..8 * i + 8].copy_from_slice(&tmp[i][j].to_le_bytes());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keccak::{shake128_reader, shake256_reader, SHAKE128_RATE, SHAKE256_RATE};

    #[test]
    fn matches_scalar_streams() {
        let Some(t) = Avx2::detect() else { return };
        let seeds: Vec<Vec<u8>> = (0..4u8).map(|i| (0..34).map(|j| j ^ (i * 37)).collect()).collect();
        for (rate, scalar) in [
            (SHAKE128_RATE, shake128_reader as fn(&[&[u8]]) -> crate::keccak::XofReader),
            (SHAKE256_RATE, shake256_reader),
        ] {
            let mut st = StateX4::absorb_shake(t, rate, [&seeds[0], &seeds[1], &seeds[2], &seeds[3]]);
            let mut got = vec![vec![0u8; 3 * rate]; 4];
            for blk in 0..3 {
                let [a, b, c, d] = &mut got[..] else { unreachable!() };
                let r = blk * rate..(blk + 1) * rate;
                st.squeeze_block(t, rate, [&mut a[r.clone()], &mut b[r.clone()], &mut c[r.clone()], &mut d[r]]);
            }
            for (seed, out) in seeds.iter().zip(&got) {
                assert_eq!(&scalar(&[seed]).squeeze_vec(3 * rate), out);
            }
        }
    }
}
