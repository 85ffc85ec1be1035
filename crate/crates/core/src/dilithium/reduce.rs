//! 32-bit modular reduction for q = 8380417, mirroring the int32_t reference
//! arithmetic exactly.

use super::params::Q;

/// q^-1 mod 2^32.
pub(crate) const QINV: i32 = 58728449;
/// 2^64 / 256 mod q, the inverse NTT scale.
pub(crate) const INVNTT_SCALE: i32 = 41978;

/// For |a| < 2^31 * q returns a value congruent to a * 2^-32 in (-q, q).
#[inline(always)]
pub(crate) fn montgomery_reduce(a: i64) -> i32 {
    let t = (a as i32).wrapping_mul(QINV);
    ((a - t as i64 * Q as i64) >> 32) as i32
}

/// For a <= 2^31 - 2^22 - 1 returns r congruent to a with -6283009 <= r <= 6283007.
#[inline(always)]
pub(crate) fn reduce32(a: i32) -> i32 {
    let t = (a + (1 << 22)) >> 23;
    a - t * Q
}

#[inline(always)]
pub(crate) fn caddq(a: i32) -> i32 {
    a + ((a >> 31) & Q)
}

#[inline(always)]
pub(crate) fn freeze(a: i32) -> i32 {
    caddq(reduce32(a))
}
