//! 16-bit modular reduction for q = 3329. Arithmetic wraps exactly like the
//! int16_t reference code so that every backend agrees bit for bit.

use super::params::Q;

/// q^-1 mod 2^16, as a signed value.
pub(crate) const QINV: i16 = -3327;
/// 2^16 mod q.
#[cfg(test)]
pub(crate) const MONT: i16 = 2285;
/// round(2^26 / q).
pub(crate) const BARRETT_V: i16 = 20159;
/// 2^32 mod q: multiplying by it with a Montgomery reduction lands in the
/// Montgomery domain.
pub(crate) const MONT_SQ: i16 = 1353;
/// 2^32 / 128 mod q, the inverse NTT scale.
pub(crate) const INVNTT_SCALE: i16 = 1441;

/// For |a| < q * 2^15 returns a value congruent to a * 2^-16 in (-q, q).
#[inline(always)]
pub(crate) fn montgomery_reduce(a: i32) -> i16 {
    let t = (a as i16).wrapping_mul(QINV);
    ((a - (t as i32) * (Q as i32)) >> 16) as i16
}

/// Centered representative of a mod q in [-(q-1)/2, (q-1)/2].
#[inline(always)]
pub(crate) fn barrett_reduce(a: i16) -> i16 {
    let t = ((BARRETT_V as i32 * a as i32 + (1 << 25)) >> 26) as i16;
    a.wrapping_sub(t.wrapping_mul(Q))
}

#[inline(always)]
pub(crate) fn fqmul(a: i16, b: i16) -> i16 {
    montgomery_reduce(a as i32 * b as i32)
}

/// Maps (-q, q) to [0, q).
#[inline(always)]
pub(crate) fn caddq(a: i16) -> i16 {
    a.wrapping_add((a >> 15) & Q)
}
