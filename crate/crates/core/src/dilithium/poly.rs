//! Polynomials over Z_q[X]/(X^256 + 1) for q = 8380417, samplers, and the
//! bit-packed encodings used in keys and signatures.

use super::params::{DilithiumParams, CRHBYTES, D, N, Q, SEEDBYTES};
use super::reduce::{caddq, montgomery_reduce, reduce32, INVNTT_SCALE};
use crate::keccak::{shake128_reader, shake256_reader, XofReader, SHAKE128_RATE, SHAKE256_RATE};

/// Powers of the 512th root of unity 1753 in bit-reversed order, Montgomery
/// form, centered. Entry 0 is unused.
pub(crate) const ZETAS: [i32; N] = [
    0, 25847, -2608894, -518909, 237124, -777960, -876248, 466468,
    1826347, 2353451, -359251, -2091905, 3119733, -2884855, 3111497, 2680103,
    2725464, 1024112, -1079900, 3585928, -549488, -1119584, 2619752, -2108549,
    -2118186, -3859737, -1399561, -3277672, 1757237, -19422, 4010497, 280005,
    2706023, 95776, 3077325, 3530437, -1661693, -3592148, -2537516, 3915439,
    -3861115, -3043716, 3574422, -2867647, 3539968, -300467, 2348700, -539299,
    -1699267, -1643818, 3505694, -3821735, 3507263, -2140649, -1600420, 3699596,
    811944, 531354, 954230, 3881043, 3900724, -2556880, 2071892, -2797779,
    -3930395, -1528703, -3677745, -3041255, -1452451, 3475950, 2176455, -1585221,
    -1257611, 1939314, -4083598, -1000202, -3190144, -3157330, -3632928, 126922,
    3412210, -983419, 2147896, 2715295, -2967645, -3693493, -411027, -2477047,
    -671102, -1228525, -22981, -1308169, -381987, 1349076, 1852771, -1430430,
    -3343383, 264944, 508951, 3097992, 44288, -1100098, 904516, 3958618,
    -3724342, -8578, 1653064, -3249728, 2389356, -210977, 759969, -1316856,
    189548, -3553272, 3159746, -1851402, -2409325, -177440, 1315589, 1341330,
    1285669, -1584928, -812732, -1439742, -3019102, -3881060, -3628969, 3839961,
    2091667, 3407706, 2316500, 3817976, -3342478, 2244091, -2446433, -3562462,
    266997, 2434439, -1235728, 3513181, -3520352, -3759364, -1197226, -3193378,
    900702, 1859098, 909542, 819034, 495491, -1613174, -43260, -522500,
    -655327, -3122442, 2031748, 3207046, -3556995, -525098, -768622, -3595838,
    342297, 286988, -2437823, 4108315, 3437287, -3342277, 1735879, 203044,
    2842341, 2691481, -2590150, 1265009, 4055324, 1247620, 2486353, 1595974,
    -3767016, 1250494, 2635921, -3548272, -2994039, 1869119, 1903435, -1050970,
    -1333058, 1237275, -3318210, -1430225, -451100, 1312455, 3306115, -1962642,
    -1279661, 1917081, -2546312, -1374803, 1500165, 777191, 2235880, 3406031,
    -542412, -2831860, -1671176, -1846953, -2584293, -3724270, 594136, -3776993,
    -2013608, 2432395, 2454455, -164721, 1957272, 3369112, 185531, -1207385,
    -3183426, 162844, 1616392, 3014001, 810149, 1652634, -3694233, -1799107,
    -3038916, 3523897, 3866901, 269760, 2213111, -975884, 1717735, 472078,
    -426683, 1723600, -1803090, 1910376, -1667432, -1104333, -260646, -3833893,
    -2939036, -2235985, -420899, -2286327, 183443, -976891, 1612842, -3545687,
    -554416, 3919660, -48306, -1362209, 3937738, 1400424, -846154, 1976782,
];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[repr(C, align(32))]
pub(crate) struct Poly {
    pub(crate) c: [i32; N],
}

impl Default for Poly {
    fn default() -> Self {
        Poly { c: [0; N] }
    }
}

impl Poly {
    /// Forward NTT without reduction; output bounded by 9q for inputs below q.
    pub(crate) fn ntt(&mut self) {
        let a = &mut self.c;
        let mut k = 0;
        let mut len = 128;
        while len > 0 {
            for start in (0..N).step_by(2 * len) {
                k += 1;
                let zeta = ZETAS[k] as i64;
                for j in start..start + len {
                    let t = montgomery_reduce(zeta * a[j + len] as i64);
                    a[j + len] = a[j] - t;
                    a[j] += t;
                }
            }
            len >>= 1;
        }
    }

    /// Inverse NTT; the output carries an extra factor 2^32.
    pub(crate) fn invntt_tomont(&mut self) {
        let a = &mut self.c;
        let mut k = N;
        let mut len = 1;
        while len < N {
            for start in (0..N).step_by(2 * len) {
                k -= 1;
                let zeta = -ZETAS[k] as i64;
                for j in start..start + len {
                    let t = a[j];
                    a[j] = t + a[j + len];
                    a[j + len] = montgomery_reduce(zeta * (t - a[j + len]) as i64);
                }
            }
            len <<= 1;
        }
        for x in a.iter_mut() {
            *x = montgomery_reduce(INVNTT_SCALE as i64 * *x as i64);
        }
    }

    /// Coefficient-wise product in the NTT domain; carries a factor 2^-32.
    pub(crate) fn pointwise_montgomery(&self, b: &Poly) -> Poly {
        let mut r = Poly::default();
        for ((r, &x), &y) in r.c.iter_mut().zip(&self.c).zip(&b.c) {
            *r = montgomery_reduce(x as i64 * y as i64);
        }
        r
    }

    pub(crate) fn reduce(&mut self) {
        for x in self.c.iter_mut() {
            *x = reduce32(*x);
        }
    }

    pub(crate) fn caddq(&mut self) {
        for x in self.c.iter_mut() {
            *x = caddq(*x);
        }
    }

    pub(crate) fn add_assign(&mut self, b: &Poly) {
        for (x, y) in self.c.iter_mut().zip(&b.c) {
            *x += *y;
        }
    }

    pub(crate) fn sub_assign(&mut self, b: &Poly) {
        for (x, y) in self.c.iter_mut().zip(&b.c) {
            *x -= *y;
        }
    }

    pub(crate) fn shiftl(&mut self) {
        for x in self.c.iter_mut() {
            *x <<= D;
        }
    }

    /// True when some coefficient of this reduced polynomial has absolute
    /// value at least `bound`. Scans every coefficient and never branches on
    /// their values or signs.
    pub(crate) fn exceeds(&self, bound: i32) -> bool {
        if bound > (Q - 1) / 8 {
            return true;
        }
        let mut flag = 0i32;
        for &x in &self.c {
            let abs = x - ((x >> 31) & (2 * x));
            flag |= (bound - 1 - abs) >> 31;
        }
        flag != 0
    }
}

/// Appends `bits`-bit values to `out`, least significant bit first.
fn pack_bits(vals: impl Iterator<Item = u32>, bits: u32, out: &mut [u8]) {
    let mut acc: u64 = 0;
    let mut have = 0;
    let mut pos = 0;
    for v in vals {
        acc |= (v as u64) << have;
        have += bits;
        while have >= 8 {
            out[pos] = acc as u8;
            pos += 1;
            acc >>= 8;
            have -= 8;
        }
    }
    debug_assert_eq!(pos, out.len());
}

fn unpack_bits(input: &[u8], bits: u32, mut f: impl FnMut(usize, u32)) {
    let mask = (1u64 << bits) - 1;
    let mut acc: u64 = 0;
    let mut have = 0;
    let mut bytes = input.iter();
    for i in 0..N {
        while have < bits {
            acc |= (*bytes.next().unwrap() as u64) << have;
            have += 8;
        }
        f(i, (acc & mask) as u32);
        acc >>= bits;
        have -= bits;
    }
}

impl Poly {
    pub(crate) fn pack_t1(&self, out: &mut [u8]) {
        pack_bits(self.c.iter().map(|&x| x as u32), 10, out);
    }

    pub(crate) fn unpack_t1(a: &[u8]) -> Poly {
        let mut r = Poly::default();
        unpack_bits(a, 10, |i, v| r.c[i] = v as i32);
        r
    }

    pub(crate) fn pack_t0(&self, out: &mut [u8]) {
        pack_bits(self.c.iter().map(|&x| ((1 << (D - 1)) - x) as u32), D, out);
    }

    pub(crate) fn unpack_t0(a: &[u8]) -> Poly {
        let mut r = Poly::default();
        unpack_bits(a, D, |i, v| r.c[i] = (1 << (D - 1)) - v as i32);
        r
    }

    pub(crate) fn pack_eta(&self, p: &DilithiumParams, out: &mut [u8]) {
        pack_bits(self.c.iter().map(|&x| (p.eta - x) as u32), p.eta_bits(), out);
    }

    pub(crate) fn unpack_eta(p: &DilithiumParams, a: &[u8]) -> Poly {
        let mut r = Poly::default();
        unpack_bits(a, p.eta_bits(), |i, v| r.c[i] = p.eta - v as i32);
        r
    }

    pub(crate) fn pack_z(&self, p: &DilithiumParams, out: &mut [u8]) {
        pack_bits(self.c.iter().map(|&x| (p.gamma1 - x) as u32), p.z_bits(), out);
    }

    pub(crate) fn unpack_z(p: &DilithiumParams, a: &[u8]) -> Poly {
        let mut r = Poly::default();
        unpack_bits(a, p.z_bits(), |i, v| r.c[i] = p.gamma1 - v as i32);
        r
    }

    pub(crate) fn pack_w1(&self, p: &DilithiumParams, out: &mut [u8]) {
        pack_bits(self.c.iter().map(|&x| x as u32), p.w1_bits(), out);
    }
}

/// Fills `r[ctr..]` with 23-bit values below q drawn from `buf`.
pub(crate) fn rej_uniform(r: &mut [i32; N], mut ctr: usize, buf: &[u8]) -> usize {
    for chunk in buf.chunks_exact(3) {
        if ctr >= N {
            break;
        }
        let t = (chunk[0] as u32 | (chunk[1] as u32) << 8 | (chunk[2] as u32) << 16) & 0x7f_ffff;
        if t < Q as u32 {
            r[ctr] = t as i32;
            ctr += 1;
        }
    }
    ctr
}

/// Fills `r[ctr..]` with values in [-eta, eta] drawn from the nibbles of `buf`.
pub(crate) fn rej_eta(eta: i32, r: &mut [i32; N], mut ctr: usize, buf: &[u8]) -> usize {
    for &b in buf {
        if ctr >= N {
            break;
        }
        for t in [(b & 0x0f) as i32, (b >> 4) as i32] {
            if ctr >= N {
                break;
            }
            if eta == 2 && t < 15 {
                r[ctr] = 2 - (t - ((205 * t) >> 10) * 5);
                ctr += 1;
            } else if eta == 4 && t < 9 {
                r[ctr] = 4 - t;
                ctr += 1;
            }
        }
    }
    ctr
}

/// Uniform polynomial from SHAKE128(seed || nonce).
pub(crate) fn uniform(seed: &[u8; SEEDBYTES], nonce: u16) -> Poly {
    uniform_from(&mut shake128_reader(&[seed, &nonce.to_le_bytes()]))
}

pub(crate) fn uniform_from(xof: &mut XofReader) -> Poly {
    let mut r = Poly::default();
    let mut buf = [0u8; 5 * SHAKE128_RATE];
    xof.squeeze_blocks(&mut buf);
    let mut ctr = rej_uniform(&mut r.c, 0, &buf);
    while ctr < N {
        xof.squeeze_blocks(&mut buf[..SHAKE128_RATE]);
        ctr = rej_uniform(&mut r.c, ctr, &buf[..SHAKE128_RATE]);
    }
    r
}

/// Short polynomial from SHAKE256(seed || nonce).
pub(crate) fn uniform_eta(eta: i32, seed: &[u8; CRHBYTES], nonce: u16) -> Poly {
    let mut xof = shake256_reader(&[seed, &nonce.to_le_bytes()]);
    let mut r = Poly::default();
    let mut buf = [0u8; SHAKE256_RATE];
    let mut ctr = 0;
    while ctr < N {
        xof.squeeze_blocks(&mut buf);
        ctr = rej_eta(eta, &mut r.c, ctr, &buf);
    }
    r
}

/// Mask polynomial with coefficients in (-gamma1, gamma1] from SHAKE256(seed || nonce).
pub(crate) fn uniform_gamma1(p: &DilithiumParams, seed: &[u8; CRHBYTES], nonce: u16) -> Poly {
    let mut buf = [0u8; 5 * SHAKE256_RATE];
    let buf = &mut buf[..p.poly_z_bytes().div_ceil(SHAKE256_RATE) * SHAKE256_RATE];
    shake256_reader(&[seed, &nonce.to_le_bytes()]).squeeze_blocks(buf);
    Poly::unpack_z(p, &buf[..p.poly_z_bytes()])
}

/// Challenge polynomial with exactly `tau` coefficients in {-1, 1}.
pub(crate) fn challenge(seed: &[u8], tau: usize) -> Poly {
    let mut xof = shake256_reader(&[seed]);
    let mut buf = [0u8; SHAKE256_RATE];
    xof.squeeze_blocks(&mut buf);
    let mut signs = u64::from_le_bytes(buf[..8].try_into().unwrap());
    let mut pos = 8;
    let mut c = Poly::default();
    for i in N - tau..N {
        let b = loop {
            if pos >= SHAKE256_RATE {
                xof.squeeze_blocks(&mut buf);
                pos = 0;
            }
            let b = buf[pos] as usize;
            pos += 1;
            if b <= i {
                break b;
            }
        };
        c.c[i] = c.c[b];
        c.c[b] = 1 - 2 * (signs & 1) as i32;
        signs >>= 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilithium::DilithiumLevel;

    fn pow_mod(mut b: i64, mut e: u32, m: i64) -> i64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    }

    #[test]
    fn zetas_are_bit_reversed_powers_of_1753() {
        let q = Q as i64;
        for i in 1..N {
            let brv = (i as u8).reverse_bits();
            let mut expect = (pow_mod(1753, brv as u32, q) << 32) % q;
            if expect > q / 2 {
                expect -= q;
            }
            assert_eq!(ZETAS[i] as i64, expect, "index {i}");
        }
    }

    #[test]
    fn packings_roundtrip() {
        for level in DilithiumLevel::ALL {
            let p = level.params();
            let mut a = Poly::default();
            for (i, x) in a.c.iter_mut().enumerate() {
                *x = (i as i32 * 7919) % (2 * p.eta + 1) - p.eta;
            }
            let mut buf = vec![0u8; p.poly_eta_bytes()];
            a.pack_eta(&p, &mut buf);
            assert_eq!(Poly::unpack_eta(&p, &buf), a);

            for (i, x) in a.c.iter_mut().enumerate() {
                *x = (i as i32 * 104729) % (2 * p.gamma1) - p.gamma1 + 1;
            }
            let mut buf = vec![0u8; p.poly_z_bytes()];
            a.pack_z(&p, &mut buf);
            assert_eq!(Poly::unpack_z(&p, &buf), a);
        }
        let mut a = Poly::default();
        for (i, x) in a.c.iter_mut().enumerate() {
            *x = (i as i32 * 31) % (1 << D) - (1 << (D - 1)) + 1;
        }
        let mut buf = [0u8; 416];
        a.pack_t0(&mut buf);
        assert_eq!(Poly::unpack_t0(&buf), a);
    }

    #[test]
    fn exceeds_is_strict_bound() {
        let mut a = Poly::default();
        a.c[5] = -99;
        assert!(!a.exceeds(100));
        assert!(a.exceeds(99));
        a.c[5] = 99;
        assert!(a.exceeds(99));
    }
}
