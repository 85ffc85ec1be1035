//! AVX2 backend. Every vector step performs the same wrapping 16-bit
//! operations as the scalar code, only sixteen lanes at a time, so results are
//! bit-identical. Coefficients stay in natural order; the last three NTT
//! layers reshuffle pairs of registers so each butterfly sees its partner in
//! the same lane of another register.

use std::arch::x86_64::*;
use std::sync::OnceLock;

use super::params::{N, Q, SYMBYTES};
use super::poly::{rej_uniform, Poly, ZETAS};
use super::reduce::{BARRETT_V, INVNTT_SCALE, QINV};
use crate::arch::Avx2;
use crate::keccak::x4::StateX4;
use crate::keccak::{shake128_reader, shake256_into, SHAKE128_RATE, SHAKE256_RATE};

type Lanes = [i16; 16];

/// Per-lane twiddle factors for the in-register layers and the base
/// multiplication, derived by pushing coefficient indices through the same
/// shuffles the transforms use.
struct Tables {
    /// Forward layers of butterfly distance 8, 4, 2; one vector per register pair.
    fwd: [[Lanes; 8]; 3],
    /// Inverse layers of distance 2, 4, 8.
    inv: [[Lanes; 8]; 3],
    base: [Lanes; 8],
}

fn tables(t: Avx2) -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| unsafe { build_tables(t) })
}

#[target_feature(enable = "avx2")]
unsafe fn build_tables(_t: Avx2) -> Tables {
    let index_reg = |r: usize| -> __m256i {
        let idx: Lanes = std::array::from_fn(|l| (16 * r + l) as i16);
        _mm256_loadu_si256(idx.as_ptr() as *const __m256i)
    };
    let lanes = |v: __m256i| -> Lanes {
        let mut out = [0i16; 16];
        _mm256_storeu_si256(out.as_mut_ptr() as *mut __m256i, v);
        out
    };
    let mut tbl = Tables {
        fwd: [[[0; 16]; 8]; 3],
        inv: [[[0; 16]; 8]; 3],
        base: [[0; 16]; 8],
    };
    for (layer, len) in [8usize, 4, 2].into_iter().enumerate() {
        for m in 0..8 {
            let (x, _) = split(len, index_reg(2 * m), index_reg(2 * m + 1));
            let idx = lanes(x);
            for l in 0..16 {
                let block = idx[l] as usize / (2 * len);
                tbl.fwd[layer][m][l] = ZETAS[128 / len + block];
                tbl.inv[2 - layer][m][l] = ZETAS[256 / len - 1 - block];
            }
        }
    }
    for m in 0..8 {
        let (a0, _) = split_pairs(index_reg(2 * m), index_reg(2 * m + 1));
        let idx = lanes(a0);
        for l in 0..16 {
            let c = idx[l] as usize;
            let z = ZETAS[64 + c / 4];
            tbl.base[m][l] = if (c / 2).is_multiple_of(2) { z } else { -z };
        }
    }
    tbl
}

#[inline(always)]
unsafe fn load(v: &Lanes) -> __m256i {
    _mm256_loadu_si256(v.as_ptr() as *const __m256i)
}

#[inline(always)]
unsafe fn fqmul(a: __m256i, b: __m256i) -> __m256i {
    let lo = _mm256_mullo_epi16(a, b);
    let hi = _mm256_mulhi_epi16(a, b);
    let t = _mm256_mullo_epi16(lo, _mm256_set1_epi16(QINV));
    _mm256_sub_epi16(hi, _mm256_mulhi_epi16(t, _mm256_set1_epi16(Q)))
}

#[inline(always)]
unsafe fn barrett(a: __m256i) -> __m256i {
    let t = _mm256_mulhi_epi16(a, _mm256_set1_epi16(BARRETT_V));
    let t = _mm256_srai_epi16(_mm256_add_epi16(t, _mm256_set1_epi16(1 << 9)), 10);
    _mm256_sub_epi16(a, _mm256_mullo_epi16(t, _mm256_set1_epi16(Q)))
}

/// Gathers butterfly partners at distance `len` (8, 4 or 2) from two adjacent
/// registers into (low halves, high halves).
#[inline(always)]
unsafe fn split(len: usize, a: __m256i, b: __m256i) -> (__m256i, __m256i) {
    match len {
        8 => (_mm256_permute2x128_si256(a, b, 0x20), _mm256_permute2x128_si256(a, b, 0x31)),
        4 => (_mm256_unpacklo_epi64(a, b), _mm256_unpackhi_epi64(a, b)),
        _ => (
            _mm256_blend_epi32(a, _mm256_slli_epi64(b, 32), 0xAA),
            _mm256_blend_epi32(_mm256_srli_epi64(a, 32), b, 0xAA),
        ),
    }
}

/// Inverse of [`split`]. Each of these shuffles is an involution on pairs.
#[inline(always)]
unsafe fn join(len: usize, x: __m256i, y: __m256i) -> (__m256i, __m256i) {
    split(len, x, y)
}

/// Separates even and odd coefficients of two registers.
#[inline(always)]
unsafe fn split_pairs(a: __m256i, b: __m256i) -> (__m256i, __m256i) {
    (
        _mm256_blend_epi16(a, _mm256_slli_epi32(b, 16), 0xAA),
        _mm256_blend_epi16(_mm256_srli_epi32(a, 16), b, 0xAA),
    )
}

#[inline(always)]
unsafe fn load_poly(p: &Poly) -> [__m256i; 16] {
    std::array::from_fn(|i| _mm256_loadu_si256(p.c.as_ptr().add(16 * i) as *const __m256i))
}

#[inline(always)]
unsafe fn store_poly(p: &mut Poly, r: &[__m256i; 16]) {
    for (i, v) in r.iter().enumerate() {
        _mm256_storeu_si256(p.c.as_mut_ptr().add(16 * i) as *mut __m256i, *v);
    }
}

#[target_feature(enable = "avx2")]
unsafe fn ntt_impl(tbl: &Tables, p: &mut Poly) {
    let mut r = load_poly(p);
    let mut k = 1;
    let mut len = 8; // butterfly distance in registers
    while len >= 1 {
        for start in (0..16).step_by(2 * len) {
            let zeta = _mm256_set1_epi16(ZETAS[k]);
            k += 1;
            for j in start..start + len {
                let t = fqmul(zeta, r[j + len]);
                r[j + len] = _mm256_sub_epi16(r[j], t);
                r[j] = _mm256_add_epi16(r[j], t);
            }
        }
        len >>= 1;
    }
    for (layer, len) in [8usize, 4, 2].into_iter().enumerate() {
        for m in 0..8 {
            let (x, y) = split(len, r[2 * m], r[2 * m + 1]);
            let t = fqmul(load(&tbl.fwd[layer][m]), y);
            let (a, b) = join(len, _mm256_add_epi16(x, t), _mm256_sub_epi16(x, t));
            r[2 * m] = a;
            r[2 * m + 1] = b;
        }
    }
    store_poly(p, &r);
}

#[target_feature(enable = "avx2")]
unsafe fn invntt_impl(tbl: &Tables, p: &mut Poly) {
    let mut r = load_poly(p);
    for (layer, len) in [2usize, 4, 8].into_iter().enumerate() {
        for m in 0..8 {
            let (x, y) = split(len, r[2 * m], r[2 * m + 1]);
            let lo = barrett(_mm256_add_epi16(x, y));
            let hi = fqmul(load(&tbl.inv[layer][m]), _mm256_sub_epi16(y, x));
            let (a, b) = join(len, lo, hi);
            r[2 * m] = a;
            r[2 * m + 1] = b;
        }
    }
    let mut k = 15;
    let mut len = 1;
    while len <= 8 {
        for start in (0..16).step_by(2 * len) {
            let zeta = _mm256_set1_epi16(ZETAS[k]);
            k -= 1;
            for j in start..start + len {
                let t = r[j];
                r[j] = barrett(_mm256_add_epi16(t, r[j + len]));
                r[j + len] = fqmul(zeta, _mm256_sub_epi16(r[j + len], t));
            }
        }
        len <<= 1;
    }
    let f = _mm256_set1_epi16(INVNTT_SCALE);
    for v in r.iter_mut() {
        *v = fqmul(*v, f);
    }
    store_poly(p, &r);
}

#[target_feature(enable = "avx2")]
unsafe fn basemul_acc_impl(tbl: &Tables, a: &[Poly], b: &[Poly]) -> Poly {
    let mut acc = [_mm256_setzero_si256(); 16];
    for (pa, pb) in a.iter().zip(b) {
        let ra = load_poly(pa);
        let rb = load_poly(pb);
        for m in 0..8 {
            let (a0, a1) = split_pairs(ra[2 * m], ra[2 * m + 1]);
            let (b0, b1) = split_pairs(rb[2 * m], rb[2 * m + 1]);
            let r0 = _mm256_add_epi16(fqmul(fqmul(a1, b1), load(&tbl.base[m])), fqmul(a0, b0));
            let r1 = _mm256_add_epi16(fqmul(a0, b1), fqmul(a1, b0));
            let (u, w) = split_pairs(r0, r1);
            acc[2 * m] = _mm256_add_epi16(acc[2 * m], u);
            acc[2 * m + 1] = _mm256_add_epi16(acc[2 * m + 1], w);
        }
    }
    let mut r = Poly::default();
    store_poly(&mut r, &acc);
    r
}

pub(crate) fn ntt(t: Avx2, p: &mut Poly) {
    // SAFETY: the Avx2 token proves the feature is present.
    unsafe { ntt_impl(tables(t), p) }
}

pub(crate) fn invntt(t: Avx2, p: &mut Poly) {
    // SAFETY: as above.
    unsafe { invntt_impl(tables(t), p) }
}

pub(crate) fn basemul_acc(t: Avx2, a: &[Poly], b: &[Poly]) -> Poly {
    // SAFETY: as above.
    unsafe { basemul_acc_impl(tables(t), a, b) }
}

#[target_feature(enable = "avx2")]
unsafe fn rej_uniform_impl(r: &mut [i16; N], mut ctr: usize, buf: &[u8]) -> usize {
    let q = _mm256_set1_epi16(Q);
    let mask = _mm256_set1_epi16(0xfff);
    let spread = _mm256_setr_epi8(
        0, 1, 1, 2, 3, 4, 4, 5, 6, 7, 7, 8, 9, 10, 10, 11, 4, 5, 5, 6, 7, 8, 8, 9, 10, 11, 11, 12, 13, 14, 14, 15,
    );
    let mut pos = 0;
    let mut vals = [0i16; 16];
    // Each step decodes 24 bytes into sixteen 12-bit candidates, reading 32.
    while ctr + 16 <= N && pos + 32 <= buf.len() {
        let f = _mm256_loadu_si256(buf.as_ptr().add(pos) as *const __m256i);
        let f = _mm256_shuffle_epi8(_mm256_permute4x64_epi64::<0x94>(f), spread);
        let f = _mm256_and_si256(_mm256_blend_epi16::<0xAA>(f, _mm256_srli_epi16::<4>(f)), mask);
        let good = _mm256_movemask_epi8(_mm256_cmpgt_epi16(q, f)) as u32;
        _mm256_storeu_si256(vals.as_mut_ptr() as *mut __m256i, f);
        for (i, &v) in vals.iter().enumerate() {
            r[ctr] = v;
            ctr += ((good >> (2 * i)) & 1) as usize;
        }
        pos += 24;
    }
    rej_uniform(r, ctr, &buf[pos..])
}

/// Same contract as the scalar `rej_uniform`.
pub(crate) fn rej_uniform_avx2(_t: Avx2, r: &mut [i16; N], ctr: usize, buf: &[u8]) -> usize {
    // SAFETY: the Avx2 token proves the feature is present.
    unsafe { rej_uniform_impl(r, ctr, buf) }
}

#[target_feature(enable = "avx2")]
unsafe fn cbd2_impl(buf: &[u8]) -> Poly {
    let mask55 = _mm256_set1_epi32(0x5555_5555);
    let mask33 = _mm256_set1_epi32(0x3333_3333);
    let mask03 = _mm256_set1_epi32(0x0303_0303);
    let mask0f = _mm256_set1_epi32(0x0f0f_0f0f);
    let mut r = Poly::default();
    assert!(buf.len() >= N / 2);
    for i in 0..N / 64 {
        let mut f0 = _mm256_loadu_si256(buf.as_ptr().add(32 * i) as *const __m256i);
        // Bit pairs summed, then a - b + 3 per nibble, then split nibbles.
        let mut f1 = _mm256_and_si256(mask55, _mm256_srli_epi16::<1>(f0));
        f0 = _mm256_add_epi8(_mm256_and_si256(mask55, f0), f1);
        f1 = _mm256_and_si256(mask33, _mm256_srli_epi16::<2>(f0));
        f0 = _mm256_sub_epi8(_mm256_add_epi8(_mm256_and_si256(mask33, f0), mask33), f1);
        f1 = _mm256_sub_epi8(_mm256_and_si256(mask0f, _mm256_srli_epi16::<4>(f0)), mask03);
        f0 = _mm256_sub_epi8(_mm256_and_si256(mask0f, f0), mask03);
        let lo = _mm256_unpacklo_epi8(f0, f1);
        let hi = _mm256_unpackhi_epi8(f0, f1);
        let out = r.c.as_mut_ptr().add(64 * i) as *mut __m256i;
        _mm256_storeu_si256(out, _mm256_cvtepi8_epi16(_mm256_castsi256_si128(lo)));
        _mm256_storeu_si256(out.add(1), _mm256_cvtepi8_epi16(_mm256_castsi256_si128(hi)));
        _mm256_storeu_si256(out.add(2), _mm256_cvtepi8_epi16(_mm256_extracti128_si256::<1>(lo)));
        _mm256_storeu_si256(out.add(3), _mm256_cvtepi8_epi16(_mm256_extracti128_si256::<1>(hi)));
    }
    r
}

/// Reads 8 bytes past the 192 it consumes.
#[target_feature(enable = "avx2")]
unsafe fn cbd3_impl(buf: &[u8]) -> Poly {
    let mask249 = _mm256_set1_epi32(0x24_9249);
    let mask6db = _mm256_set1_epi32(0x6d_b6db);
    let mask07 = _mm256_set1_epi32(7);
    let mask70 = _mm256_set1_epi32(7 << 16);
    let mask3 = _mm256_set1_epi16(3);
    // Each 32-bit lane receives one 3-byte group, little-endian.
    let spread = _mm256_set_epi8(
        -1, 15, 14, 13, -1, 12, 11, 10, -1, 9, 8, 7, -1, 6, 5, 4, -1, 11, 10, 9, -1, 8, 7, 6, -1, 5, 4, 3, -1, 2, 1, 0,
    );
    let mut r = Poly::default();
    assert!(buf.len() >= 3 * N / 4 + 8);
    for i in 0..N / 32 {
        let mut f0 = _mm256_loadu_si256(buf.as_ptr().add(24 * i) as *const __m256i);
        f0 = _mm256_shuffle_epi8(_mm256_permute4x64_epi64::<0x94>(f0), spread);
        let f1 = _mm256_and_si256(mask249, _mm256_srli_epi32::<1>(f0));
        let f2 = _mm256_and_si256(mask249, _mm256_srli_epi32::<2>(f0));
        f0 = _mm256_add_epi32(_mm256_add_epi32(_mm256_and_si256(mask249, f0), f1), f2);
        // a - b + 3 in each 3-bit pair of the 24-bit lane
        f0 = _mm256_sub_epi32(_mm256_add_epi32(f0, mask6db), _mm256_srli_epi32::<3>(f0));
        let a = _mm256_add_epi16(
            _mm256_and_si256(f0, mask07),
            _mm256_and_si256(_mm256_slli_epi32::<10>(f0), mask70),
        );
        let b = _mm256_add_epi16(
            _mm256_and_si256(_mm256_srli_epi32::<12>(f0), mask07),
            _mm256_and_si256(_mm256_srli_epi32::<2>(f0), mask70),
        );
        let a = _mm256_sub_epi16(a, mask3);
        let b = _mm256_sub_epi16(b, mask3);
        let lo = _mm256_unpacklo_epi32(a, b);
        let hi = _mm256_unpackhi_epi32(a, b);
        let out = r.c.as_mut_ptr().add(32 * i) as *mut __m256i;
        _mm256_storeu_si256(out, _mm256_permute2x128_si256::<0x20>(lo, hi));
        _mm256_storeu_si256(out.add(1), _mm256_permute2x128_si256::<0x31>(lo, hi));
    }
    r
}

/// CBD sample; `buf` must extend 8 bytes past the consumed `eta * 64`.
fn cbd_avx2(_t: Avx2, eta: usize, buf: &[u8]) -> Poly {
    // SAFETY: the Avx2 token proves the feature is present; the asserts in
    // the kernels bound every load.
    unsafe {
        match eta {
            2 => cbd2_impl(buf),
            3 => cbd3_impl(buf),
            _ => unreachable!("eta is 2 or 3"),
        }
    }
}

/// Uniform polynomials from SHAKE128(seed || nonce) for each nonce, four
/// streams at a time; a lone leftover stream runs on the scalar sponge.
pub(crate) fn sample_uniform_many(t: Avx2, seed: &[u8; SYMBYTES], nonces: &[[u8; 2]]) -> Vec<Poly> {
    const RATE: usize = SHAKE128_RATE;
    let mut out = Vec::with_capacity(nonces.len());
    for group in nonces.chunks(4) {
        if group.len() == 1 {
            let mut xof = shake128_reader(&[seed, &group[0]]);
            let mut buf = [0u8; 3 * RATE];
            xof.squeeze_blocks(&mut buf);
            let mut p = Poly::default();
            let mut ctr = rej_uniform_avx2(t, &mut p.c, 0, &buf);
            while ctr < N {
                xof.squeeze_blocks(&mut buf[..RATE]);
                ctr = rej_uniform_avx2(t, &mut p.c, ctr, &buf[..RATE]);
            }
            out.push(p);
            continue;
        }
        let inputs: [[u8; SYMBYTES + 2]; 4] = std::array::from_fn(|i| {
            let n = group[i.min(group.len() - 1)];
            let mut v = [0u8; SYMBYTES + 2];
            v[..SYMBYTES].copy_from_slice(seed);
            v[SYMBYTES..].copy_from_slice(&n);
            v
        });
        let mut st = StateX4::absorb_shake(t, RATE, [&inputs[0], &inputs[1], &inputs[2], &inputs[3]]);
        let mut bufs = [[0u8; 3 * RATE]; 4];
        for blk in 0..3 {
            let r = blk * RATE..(blk + 1) * RATE;
            let [b0, b1, b2, b3] = &mut bufs;
            st.squeeze_block(t, RATE, [&mut b0[r.clone()], &mut b1[r.clone()], &mut b2[r.clone()], &mut b3[r]]);
        }
        let mut polys = [Poly::default(); 4];
        let mut ctr = [0usize; 4];
        for i in 0..group.len() {
            ctr[i] = rej_uniform_avx2(t, &mut polys[i].c, 0, &bufs[i]);
        }
        while ctr[..group.len()].iter().any(|&c| c < N) {
            let [b0, b1, b2, b3] = &mut bufs;
            st.squeeze_block(t, RATE, [&mut b0[..RATE], &mut b1[..RATE], &mut b2[..RATE], &mut b3[..RATE]]);
            for i in 0..group.len() {
                ctr[i] = rej_uniform_avx2(t, &mut polys[i].c, ctr[i], &bufs[i][..RATE]);
            }
        }
        out.extend_from_slice(&polys[..group.len()]);
    }
    out
}

/// Noise polynomials from SHAKE256(seed || nonce) for each `(eta, nonce)`,
/// four streams at a time. Streams of one batch may use different eta: each
/// squeezes the longest length needed and its sampler reads a prefix.
pub(crate) fn noise_many(t: Avx2, seed: &[u8; SYMBYTES], specs: &[(usize, u8)]) -> Vec<Poly> {
    const RATE: usize = SHAKE256_RATE;
    let mut out = Vec::with_capacity(specs.len());
    for group in specs.chunks(4) {
        let mut bufs = [[0u8; 2 * RATE]; 4];
        if let [(eta, nonce)] = group {
            shake256_into(&[seed, &[*nonce]], &mut bufs[0][..eta * N / 4]);
        } else {
            let need = group.iter().map(|(eta, _)| eta * N / 4).max().unwrap_or(0);
            let inputs: [[u8; SYMBYTES + 1]; 4] = std::array::from_fn(|i| {
                let mut v = [0u8; SYMBYTES + 1];
                v[..SYMBYTES].copy_from_slice(seed);
                v[SYMBYTES] = group[i.min(group.len() - 1)].1;
                v
            });
            let mut st = StateX4::absorb_shake(t, RATE, [&inputs[0], &inputs[1], &inputs[2], &inputs[3]]);
            for blk in 0..need.div_ceil(RATE) {
                let r = blk * RATE..(blk + 1) * RATE;
                let [b0, b1, b2, b3] = &mut bufs;
                st.squeeze_block(t, RATE, [&mut b0[r.clone()], &mut b1[r.clone()], &mut b2[r.clone()], &mut b3[r]]);
            }
        }
        for ((eta, _), buf) in group.iter().zip(&bufs) {
            out.push(cbd_avx2(t, *eta, buf));
        }
    }
    out
}
