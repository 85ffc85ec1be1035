//! AVX2 backend for the q = 8380417 ring: eight 32-bit lanes per register,
//! with Montgomery products formed from the even and odd lanes separately so
//! every lane reproduces the scalar 64-bit arithmetic exactly. Layout and
//! twiddle tables follow the same scheme as the Kyber backend.

use std::arch::x86_64::*;
use std::sync::OnceLock;

use super::params::{DilithiumParams, CRHBYTES, N, Q, SEEDBYTES};
use super::poly::{rej_eta, rej_uniform, Poly, ZETAS};
use super::reduce::{INVNTT_SCALE, QINV};
use crate::arch::Avx2;
use crate::keccak::x4::StateX4;
use crate::keccak::{SHAKE128_RATE, SHAKE256_RATE};

type Lanes = [i32; 8];

struct Tables {
    /// Forward layers of butterfly distance 4, 2, 1; one vector per register pair.
    fwd: [[Lanes; 16]; 3],
    /// Inverse layers of distance 1, 2, 4, already negated.
    inv: [[Lanes; 16]; 3],
}

fn tables(t: Avx2) -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| unsafe { build_tables(t) })
}

#[target_feature(enable = "avx2")]
unsafe fn build_tables(_t: Avx2) -> Tables {
    let index_reg = |r: usize| -> __m256i {
        let idx: Lanes = std::array::from_fn(|l| (8 * r + l) as i32);
        _mm256_loadu_si256(idx.as_ptr() as *const __m256i)
    };
    let mut tbl = Tables {
        fwd: [[[0; 8]; 16]; 3],
        inv: [[[0; 8]; 16]; 3],
    };
    for (layer, len) in [4usize, 2, 1].into_iter().enumerate() {
        for m in 0..16 {
            let (x, _) = split(len, index_reg(2 * m), index_reg(2 * m + 1));
            let mut idx = [0i32; 8];
            _mm256_storeu_si256(idx.as_mut_ptr() as *mut __m256i, x);
            for l in 0..8 {
                let block = idx[l] as usize / (2 * len);
                tbl.fwd[layer][m][l] = ZETAS[N / (2 * len) + block];
                tbl.inv[2 - layer][m][l] = -ZETAS[N / len - 1 - block];
            }
        }
    }
    tbl
}

/// Lane-wise montgomery_reduce(a * b).
#[inline(always)]
unsafe fn mont_mul(a: __m256i, b: __m256i) -> __m256i {
    let qinv = _mm256_set1_epi32(QINV);
    let q = _mm256_set1_epi32(Q);
    let prod_even = _mm256_mul_epi32(a, b);
    let prod_odd = _mm256_mul_epi32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(b, 32));
    let t_even = _mm256_mul_epi32(prod_even, qinv);
    let t_odd = _mm256_mul_epi32(prod_odd, qinv);
    let r_even = _mm256_sub_epi64(prod_even, _mm256_mul_epi32(t_even, q));
    let r_odd = _mm256_sub_epi64(prod_odd, _mm256_mul_epi32(t_odd, q));
    _mm256_blend_epi32(_mm256_srli_epi64(r_even, 32), r_odd, 0xAA)
}

/// Gathers butterfly partners at distance `len` (4, 2 or 1 coefficients) from
/// two adjacent registers. Applying it to its own output undoes it.
#[inline(always)]
unsafe fn split(len: usize, a: __m256i, b: __m256i) -> (__m256i, __m256i) {
    match len {
        4 => (_mm256_permute2x128_si256(a, b, 0x20), _mm256_permute2x128_si256(a, b, 0x31)),
        2 => (_mm256_unpacklo_epi64(a, b), _mm256_unpackhi_epi64(a, b)),
        _ => (
            _mm256_blend_epi32(a, _mm256_slli_epi64(b, 32), 0xAA),
            _mm256_blend_epi32(_mm256_srli_epi64(a, 32), b, 0xAA),
        ),
    }
}

#[inline(always)]
unsafe fn load_poly(p: &Poly) -> [__m256i; 32] {
    std::array::from_fn(|i| _mm256_loadu_si256(p.c.as_ptr().add(8 * i) as *const __m256i))
}

#[inline(always)]
unsafe fn store_poly(p: &mut Poly, r: &[__m256i; 32]) {
    for (i, v) in r.iter().enumerate() {
        _mm256_storeu_si256(p.c.as_mut_ptr().add(8 * i) as *mut __m256i, *v);
    }
}

#[inline(always)]
unsafe fn load(v: &Lanes) -> __m256i {
    _mm256_loadu_si256(v.as_ptr() as *const __m256i)
}

#[target_feature(enable = "avx2")]
unsafe fn ntt_impl(tbl: &Tables, p: &mut Poly) {
    let mut r = load_poly(p);
    let mut k = 0;
    let mut len = 16;
    while len >= 1 {
        for start in (0..32).step_by(2 * len) {
            k += 1;
            let zeta = _mm256_set1_epi32(ZETAS[k]);
            for j in start..start + len {
                let t = mont_mul(zeta, r[j + len]);
                r[j + len] = _mm256_sub_epi32(r[j], t);
                r[j] = _mm256_add_epi32(r[j], t);
            }
        }
        len >>= 1;
    }
    for (layer, len) in [4usize, 2, 1].into_iter().enumerate() {
        for m in 0..16 {
            let (x, y) = split(len, r[2 * m], r[2 * m + 1]);
            let t = mont_mul(load(&tbl.fwd[layer][m]), y);
            let (a, b) = split(len, _mm256_add_epi32(x, t), _mm256_sub_epi32(x, t));
            r[2 * m] = a;
            r[2 * m + 1] = b;
        }
    }
    store_poly(p, &r);
}

#[target_feature(enable = "avx2")]
unsafe fn invntt_impl(tbl: &Tables, p: &mut Poly) {
    let mut r = load_poly(p);
    for (layer, len) in [1usize, 2, 4].into_iter().enumerate() {
        for m in 0..16 {
            let (x, y) = split(len, r[2 * m], r[2 * m + 1]);
            let lo = _mm256_add_epi32(x, y);
            let hi = mont_mul(load(&tbl.inv[layer][m]), _mm256_sub_epi32(x, y));
            let (a, b) = split(len, lo, hi);
            r[2 * m] = a;
            r[2 * m + 1] = b;
        }
    }
    let mut k = 32;
    let mut len = 1;
    while len < 32 {
        for start in (0..32).step_by(2 * len) {
            k -= 1;
            let zeta = _mm256_set1_epi32(-ZETAS[k]);
            for j in start..start + len {
                let t = r[j];
                r[j] = _mm256_add_epi32(t, r[j + len]);
                r[j + len] = mont_mul(zeta, _mm256_sub_epi32(t, r[j + len]));
            }
        }
        len <<= 1;
    }
    let f = _mm256_set1_epi32(INVNTT_SCALE);
    for v in r.iter_mut() {
        *v = mont_mul(f, *v);
    }
    store_poly(p, &r);
}

#[target_feature(enable = "avx2")]
unsafe fn pointwise_acc_impl(a: &[Poly], b: &[Poly]) -> Poly {
    let mut acc = [_mm256_setzero_si256(); 32];
    for (pa, pb) in a.iter().zip(b) {
        let ra = load_poly(pa);
        let rb = load_poly(pb);
        for i in 0..32 {
            acc[i] = _mm256_add_epi32(acc[i], mont_mul(ra[i], rb[i]));
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

pub(crate) fn pointwise_acc(_t: Avx2, a: &[Poly], b: &[Poly]) -> Poly {
    // SAFETY: as above.
    unsafe { pointwise_acc_impl(a, b) }
}

#[target_feature(enable = "avx2")]
unsafe fn rej_uniform_impl(r: &mut [i32; N], mut ctr: usize, buf: &[u8]) -> usize {
    let q = _mm256_set1_epi32(Q);
    let mask = _mm256_set1_epi32(0x7f_ffff);
    let spread = _mm256_setr_epi8(
        0, 1, 2, -1, 3, 4, 5, -1, 6, 7, 8, -1, 9, 10, 11, -1, 4, 5, 6, -1, 7, 8, 9, -1, 10, 11, 12, -1, 13, 14, 15, -1,
    );
    let mut pos = 0;
    let mut vals = [0i32; 8];
    // Each step decodes 24 bytes into eight 23-bit candidates, reading 32.
    while ctr + 8 <= N && pos + 32 <= buf.len() {
        let f = _mm256_loadu_si256(buf.as_ptr().add(pos) as *const __m256i);
        let f = _mm256_shuffle_epi8(_mm256_permute4x64_epi64::<0x94>(f), spread);
        let f = _mm256_and_si256(f, mask);
        let good = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpgt_epi32(q, f))) as u32;
        _mm256_storeu_si256(vals.as_mut_ptr() as *mut __m256i, f);
        for (i, &v) in vals.iter().enumerate() {
            r[ctr] = v;
            ctr += ((good >> i) & 1) as usize;
        }
        pos += 24;
    }
    rej_uniform(r, ctr, &buf[pos..])
}

#[target_feature(enable = "avx2")]
unsafe fn rej_eta_impl(eta: i32, r: &mut [i32; N], mut ctr: usize, buf: &[u8]) -> usize {
    // Accepted nibble t maps to eta - (t mod 5) for eta 2 and to 4 - t for eta 4.
    let (bound, table) = match eta {
        2 => (15, _mm_setr_epi8(2, 1, 0, -1, -2, 2, 1, 0, -1, -2, 2, 1, 0, -1, -2, 0)),
        4 => (9, _mm_setr_epi8(4, 3, 2, 1, 0, -1, -2, -3, -4, 0, 0, 0, 0, 0, 0, 0)),
        _ => unreachable!("eta is 2 or 4"),
    };
    let bound = _mm_set1_epi8(bound);
    let low = _mm_set1_epi8(0x0f);
    let mut pos = 0;
    let mut vals = [0i8; 32];
    // Each step splits 16 bytes into 32 nibbles, low nibble first.
    while ctr + 32 <= N && pos + 16 <= buf.len() {
        let b = _mm_loadu_si128(buf.as_ptr().add(pos) as *const __m128i);
        let lo = _mm_and_si128(b, low);
        let hi = _mm_and_si128(_mm_srli_epi16::<4>(b), low);
        let mut good = 0u32;
        for (half, t) in [_mm_unpacklo_epi8(lo, hi), _mm_unpackhi_epi8(lo, hi)].into_iter().enumerate() {
            good |= (_mm_movemask_epi8(_mm_cmpgt_epi8(bound, t)) as u32) << (16 * half);
            _mm_storeu_si128(vals.as_mut_ptr().add(16 * half) as *mut __m128i, _mm_shuffle_epi8(table, t));
        }
        for (i, &v) in vals.iter().enumerate() {
            r[ctr] = v as i32;
            ctr += ((good >> i) & 1) as usize;
        }
        pos += 16;
    }
    rej_eta(eta, r, ctr, &buf[pos..])
}

/// Runs SHAKE over `seed || nonce` for up to four nonces at once. The first
/// call to `consume(instance, bytes)` receives `initial` blocks and later
/// calls one block each, until it returns true for every instance.
fn squeeze_x4<const SEED: usize>(
    t: Avx2,
    rate: usize,
    initial: usize,
    seed: &[u8; SEED],
    nonces: &[u16],
    mut consume: impl FnMut(usize, &[u8]) -> bool,
) {
    const MAX: usize = 5 * SHAKE128_RATE;
    assert!((1..=4).contains(&nonces.len()) && initial * rate <= MAX);
    let inputs: [[u8; 66]; 4] = std::array::from_fn(|i| {
        let mut v = [0u8; 66];
        v[..SEED].copy_from_slice(seed);
        v[SEED..SEED + 2].copy_from_slice(&nonces[i.min(nonces.len() - 1)].to_le_bytes());
        v
    });
    let len = SEED + 2;
    let mut st = StateX4::absorb_shake(t, rate, [&inputs[0][..len], &inputs[1][..len], &inputs[2][..len], &inputs[3][..len]]);
    let mut done = [true; 4];
    done[..nonces.len()].fill(false);
    let mut bufs = [[0u8; MAX]; 4];
    for blk in 0..initial {
        let r = blk * rate..(blk + 1) * rate;
        let [b0, b1, b2, b3] = &mut bufs;
        st.squeeze_block(t, rate, [&mut b0[r.clone()], &mut b1[r.clone()], &mut b2[r.clone()], &mut b3[r]]);
    }
    let mut filled = initial * rate;
    while !done.iter().all(|&d| d) {
        for i in 0..4 {
            if !done[i] {
                done[i] = consume(i, &bufs[i][..filled]);
            }
        }
        if !done.iter().all(|&d| d) {
            let [b0, b1, b2, b3] = &mut bufs;
            st.squeeze_block(t, rate, [&mut b0[..rate], &mut b1[..rate], &mut b2[..rate], &mut b3[..rate]]);
            filled = rate;
        }
    }
}

pub(crate) fn uniform_many(t: Avx2, rho: &[u8; SEEDBYTES], nonces: &[u16]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(nonces.len());
    for group in nonces.chunks(4) {
        let mut polys = [Poly::default(); 4];
        let mut ctr = [0usize; 4];
        squeeze_x4(t, SHAKE128_RATE, 5, rho, group, |i, bytes| {
            // SAFETY: the Avx2 token proves the feature is present.
            ctr[i] = unsafe { rej_uniform_impl(&mut polys[i].c, ctr[i], bytes) };
            ctr[i] == N
        });
        out.extend_from_slice(&polys[..group.len()]);
    }
    out
}

pub(crate) fn uniform_eta_many(t: Avx2, eta: i32, seed: &[u8; CRHBYTES], first: u16, count: usize) -> Vec<Poly> {
    let nonces: Vec<u16> = (0..count as u16).map(|i| first + i).collect();
    let mut out = Vec::with_capacity(count);
    for group in nonces.chunks(4) {
        let mut polys = [Poly::default(); 4];
        let mut ctr = [0usize; 4];
        // Two blocks cover eta 4 with high probability and eta 2 always.
        squeeze_x4(t, SHAKE256_RATE, 2, seed, group, |i, bytes| {
            // SAFETY: the Avx2 token proves the feature is present.
            ctr[i] = unsafe { rej_eta_impl(eta, &mut polys[i].c, ctr[i], bytes) };
            ctr[i] == N
        });
        out.extend_from_slice(&polys[..group.len()]);
    }
    out
}

pub(crate) fn uniform_gamma1_many(t: Avx2, p: &DilithiumParams, seed: &[u8; CRHBYTES], first: u16) -> Vec<Poly> {
    let need = p.poly_z_bytes();
    let nonces: Vec<u16> = (0..p.l as u16).map(|i| first + i).collect();
    let mut out = Vec::with_capacity(p.l);
    for group in nonces.chunks(4) {
        let mut polys = [Poly::default(); 4];
        squeeze_x4(t, SHAKE256_RATE, need.div_ceil(SHAKE256_RATE), seed, group, |i, bytes| {
            polys[i] = Poly::unpack_z(p, &bytes[..need]);
            true
        });
        out.extend_from_slice(&polys[..group.len()]);
    }
    out
}
