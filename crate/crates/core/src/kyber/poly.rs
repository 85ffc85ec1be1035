//! Polynomials over Z_q[X]/(X^256 + 1) in the representation used by the
//! scalar backend, plus sampling and byte encodings shared by both backends.

use super::params::{N, POLY_BYTES, Q, SYMBYTES};
use super::reduce::{barrett_reduce, caddq, fqmul, montgomery_reduce, INVNTT_SCALE, MONT_SQ};
use crate::keccak::{shake256_into, XofReader};

/// Powers of the 256th root of unity 17 in bit-reversed order, Montgomery
/// form, centered.
pub(crate) const ZETAS: [i16; 128] = [
    -1044, -758, -359, -1517, 1493, 1422, 287, 202, -171, 622, 1577, 182, 962, -1202, -1474, 1468,
    573, -1325, 264, 383, -829, 1458, -1602, -130, -681, 1017, 732, 608, -1542, 411, -205, -1571,
    1223, 652, -552, 1015, -1293, 1491, -282, -1544, 516, -8, -320, -666, -1618, -1162, 126, 1469,
    -853, -90, -271, 830, 107, -1421, -247, -951, -398, 961, -1508, -725, 448, -1065, 677, -1275,
    -1103, 430, 555, 843, -1251, 871, 1550, 105, 422, 587, 177, -235, -291, -460, 1574, 1653, -246,
    778, 1159, -147, -777, 1483, -602, 1119, -1590, 644, -872, 349, 418, 329, -156, -75, 817, 1097,
    603, 610, 1322, -1285, -1465, 384, -1215, -136, 1218, -1335, -874, 220, -1187, -1659, -1185,
    -1530, -1278, 794, -1510, -854, -870, 478, -108, -308, 996, 991, 958, -1460, 1522, 1628,
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[repr(C, align(32))]
pub(crate) struct Poly {
    pub(crate) c: [i16; N],
}

impl Default for Poly {
    fn default() -> Self {
        Poly { c: [0; N] }
    }
}

impl Poly {
    /// In-place forward NTT. Output coefficients are bounded by 7q in
    /// absolute value and are in bit-reversed order.
    pub(crate) fn ntt(&mut self) {
        let r = &mut self.c;
        let mut k = 1;
        let mut len = 128;
        while len >= 2 {
            for start in (0..N).step_by(2 * len) {
                let zeta = ZETAS[k];
                k += 1;
                for j in start..start + len {
                    let t = fqmul(zeta, r[j + len]);
                    r[j + len] = r[j].wrapping_sub(t);
                    r[j] = r[j].wrapping_add(t);
                }
            }
            len >>= 1;
        }
    }

    /// In-place inverse NTT; the output carries an extra Montgomery factor.
    pub(crate) fn invntt_tomont(&mut self) {
        let r = &mut self.c;
        let mut k = 127;
        let mut len = 2;
        while len <= 128 {
            for start in (0..N).step_by(2 * len) {
                let zeta = ZETAS[k];
                k -= 1;
                for j in start..start + len {
                    let t = r[j];
                    r[j] = barrett_reduce(t.wrapping_add(r[j + len]));
                    r[j + len] = fqmul(zeta, r[j + len].wrapping_sub(t));
                }
            }
            len <<= 1;
        }
        for x in r.iter_mut() {
            *x = fqmul(*x, INVNTT_SCALE);
        }
    }

    /// NTT-domain product; the output carries a factor 2^-16.
    pub(crate) fn basemul_montgomery(&self, b: &Poly) -> Poly {
        let mut r = Poly::default();
        for i in 0..N / 4 {
            let zeta = ZETAS[64 + i];
            basemul(&mut r.c[4 * i..4 * i + 2], &self.c[4 * i..], &b.c[4 * i..], zeta);
            basemul(&mut r.c[4 * i + 2..4 * i + 4], &self.c[4 * i + 2..], &b.c[4 * i + 2..], -zeta);
        }
        r
    }

    pub(crate) fn reduce(&mut self) {
        for x in self.c.iter_mut() {
            *x = barrett_reduce(*x);
        }
    }

    pub(crate) fn tomont(&mut self) {
        for x in self.c.iter_mut() {
            *x = montgomery_reduce(*x as i32 * MONT_SQ as i32);
        }
    }

    pub(crate) fn add_assign(&mut self, b: &Poly) {
        for (x, y) in self.c.iter_mut().zip(&b.c) {
            *x = x.wrapping_add(*y);
        }
    }

    pub(crate) fn sub_from(&mut self, a: &Poly) {
        // self = a - self
        for (x, y) in self.c.iter_mut().zip(&a.c) {
            *x = y.wrapping_sub(*x);
        }
    }

    /// 12-bit packing of the canonical representatives.
    #[allow(clippy::wrong_self_convention)]
    pub(crate) fn to_bytes(&self, out: &mut [u8]) {
        debug_assert_eq!(out.len(), POLY_BYTES);
        for i in 0..N / 2 {
            let t0 = caddq(self.c[2 * i]) as u16;
            let t1 = caddq(self.c[2 * i + 1]) as u16;
            out[3 * i] = t0 as u8;
            out[3 * i + 1] = ((t0 >> 8) | (t1 << 4)) as u8;
            out[3 * i + 2] = (t1 >> 4) as u8;
        }
    }

    /// Inverse of [`Poly::to_bytes`]; does not reduce, so malformed input can
    /// yield values up to 4095.
    pub(crate) fn from_bytes(a: &[u8]) -> Poly {
        let mut r = Poly::default();
        for i in 0..N / 2 {
            let (a0, a1, a2) = (a[3 * i] as u16, a[3 * i + 1] as u16, a[3 * i + 2] as u16);
            r.c[2 * i] = ((a0 | (a1 << 8)) & 0xfff) as i16;
            r.c[2 * i + 1] = ((a1 >> 4) | (a2 << 4)) as i16;
        }
        r
    }

    pub(crate) fn from_msg(msg: &[u8; SYMBYTES]) -> Poly {
        let mut r = Poly::default();
        for i in 0..N / 8 {
            for j in 0..8 {
                let mask = -(((msg[i] >> j) & 1) as i16);
                r.c[8 * i + j] = mask & ((Q + 1) / 2);
            }
        }
        r
    }

    /// Accepts centered or canonical coefficients.
    #[allow(clippy::wrong_self_convention)]
    pub(crate) fn to_msg(&self) -> [u8; SYMBYTES] {
        let mut msg = [0u8; SYMBYTES];
        for i in 0..N / 8 {
            for j in 0..8 {
                let mut t = self.c[8 * i + j] as i32 as u32;
                t <<= 1;
                t = t.wrapping_add(1665);
                t = t.wrapping_mul(80635);
                t >>= 28;
                t &= 1;
                msg[i] |= (t as u8) << j;
            }
        }
        msg
    }

    /// Compresses to `d` bits per coefficient, packed little-endian.
    pub(crate) fn compress(&self, d: u32, out: &mut [u8]) {
        debug_assert_eq!(out.len(), N * d as usize / 8);
        let mut acc: u64 = 0;
        let mut bits = 0;
        let mut pos = 0;
        for &x in &self.c {
            acc |= (compress_coeff(caddq(x) as u16, d) as u64) << bits;
            bits += d;
            while bits >= 8 {
                out[pos] = acc as u8;
                pos += 1;
                acc >>= 8;
                bits -= 8;
            }
        }
    }

    pub(crate) fn decompress(a: &[u8], d: u32) -> Poly {
        let mut r = Poly::default();
        let mask = (1u64 << d) - 1;
        let mut acc: u64 = 0;
        let mut bits = 0;
        let mut bytes = a.iter();
        for x in r.c.iter_mut() {
            while bits < d {
                acc |= (*bytes.next().unwrap() as u64) << bits;
                bits += 8;
            }
            *x = decompress_coeff((acc & mask) as u16, d) as i16;
            acc >>= d;
            bits -= d;
        }
        r
    }
}

fn basemul(r: &mut [i16], a: &[i16], b: &[i16], zeta: i16) {
    let mut r0 = fqmul(a[1], b[1]);
    r0 = fqmul(r0, zeta);
    r0 = r0.wrapping_add(fqmul(a[0], b[0]));
    let r1 = fqmul(a[0], b[1]).wrapping_add(fqmul(a[1], b[0]));
    r[0] = r0;
    r[1] = r1;
}

/// round(2^d * x / q) mod 2^d for x in [0, q).
#[inline(always)]
pub(crate) fn compress_coeff(x: u16, d: u32) -> u16 {
    let q = Q as u32;
    ((((x as u32) << d) + q / 2) / q) as u16 & ((1u16 << d) - 1)
}

/// round(q * y / 2^d).
#[inline(always)]
pub(crate) fn decompress_coeff(y: u16, d: u32) -> u16 {
    ((y as u32 * Q as u32 + (1 << (d - 1))) >> d) as u16
}

/// Centered binomial sample with parameter 2 from 128 bytes.
pub(crate) fn cbd2(buf: &[u8]) -> Poly {
    let mut r = Poly::default();
    for i in 0..N / 8 {
        let t = u32::from_le_bytes(buf[4 * i..4 * i + 4].try_into().unwrap());
        let d = (t & 0x5555_5555) + ((t >> 1) & 0x5555_5555);
        for j in 0..8 {
            let a = ((d >> (4 * j)) & 3) as i16;
            let b = ((d >> (4 * j + 2)) & 3) as i16;
            r.c[8 * i + j] = a - b;
        }
    }
    r
}

/// Centered binomial sample with parameter 3 from 192 bytes.
pub(crate) fn cbd3(buf: &[u8]) -> Poly {
    let mut r = Poly::default();
    for i in 0..N / 4 {
        let t = buf[3 * i] as u32 | (buf[3 * i + 1] as u32) << 8 | (buf[3 * i + 2] as u32) << 16;
        let d = (t & 0x0024_9249) + ((t >> 1) & 0x0024_9249) + ((t >> 2) & 0x0024_9249);
        for j in 0..4 {
            let a = ((d >> (6 * j)) & 7) as i16;
            let b = ((d >> (6 * j + 3)) & 7) as i16;
            r.c[4 * i + j] = a - b;
        }
    }
    r
}

pub(crate) fn cbd(eta: usize, buf: &[u8]) -> Poly {
    match eta {
        2 => cbd2(buf),
        3 => cbd3(buf),
        _ => unreachable!("eta is 2 or 3"),
    }
}

/// Noise polynomial from SHAKE256(seed || nonce).
pub(crate) fn getnoise(eta: usize, seed: &[u8; SYMBYTES], nonce: u8) -> Poly {
    let mut buf = [0u8; 3 * N / 4];
    let buf = &mut buf[..eta * N / 4];
    shake256_into(&[seed, &[nonce]], buf);
    cbd(eta, buf)
}

/// Fills `r[ctr..]` with uniform values below q drawn 12 bits at a time from
/// `buf`; returns the new count.
pub(crate) fn rej_uniform(r: &mut [i16; N], mut ctr: usize, buf: &[u8]) -> usize {
    for chunk in buf.chunks_exact(3) {
        if ctr >= N {
            break;
        }
        let v0 = (chunk[0] as u16 | (chunk[1] as u16) << 8) & 0xfff;
        let v1 = ((chunk[1] >> 4) as u16 | (chunk[2] as u16) << 4) & 0xfff;
        if v0 < Q as u16 {
            r[ctr] = v0 as i16;
            ctr += 1;
        }
        if ctr < N && v1 < Q as u16 {
            r[ctr] = v1 as i16;
            ctr += 1;
        }
    }
    ctr
}

/// Uniform polynomial from an XOF stream.
pub(crate) fn sample_uniform(xof: &mut XofReader) -> Poly {
    let mut r = Poly::default();
    let mut buf = [0u8; 3 * 168];
    xof.squeeze_blocks(&mut buf);
    let mut ctr = rej_uniform(&mut r.c, 0, &buf);
    while ctr < N {
        xof.squeeze_blocks(&mut buf[..168]);
        ctr = rej_uniform(&mut r.c, ctr, &buf[..168]);
    }
    r
}
