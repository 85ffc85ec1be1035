//! Power-of-two rounding, decomposition into high and low parts, and hints.

use super::params::{D, Q};

/// Splits a in [0, q) as a1 * 2^13 + a0 with a0 in (-2^12, 2^12].
#[inline(always)]
pub fn power2round(a: i32) -> (i32, i32) {
    let a1 = (a + (1 << (D - 1)) - 1) >> D;
    (a1, a - (a1 << D))
}

/// Splits a in [0, q) into high bits a1 and low bits a0 with
/// a = a1 * 2 * gamma2 + a0 (mod q), a0 in (-gamma2, gamma2], except that the
/// top range wraps to a1 = 0 and a0 - 1.
#[inline(always)]
pub fn decompose(a: i32, gamma2: i32) -> (i32, i32) {
    let mut a1 = (a + 127) >> 7;
    if gamma2 == (Q - 1) / 32 {
        a1 = (a1 * 1025 + (1 << 21)) >> 22;
        a1 &= 15;
    } else {
        a1 = (a1 * 11275 + (1 << 23)) >> 24;
        a1 ^= ((43 - a1) >> 31) & a1;
    }
    let mut a0 = a - a1 * 2 * gamma2;
    a0 -= (((Q - 1) / 2 - a0) >> 31) & Q;
    (a1, a0)
}

/// 1 when adding the low part `a0` changes the high part `a1`.
#[inline(always)]
pub fn make_hint(a0: i32, a1: i32, gamma2: i32) -> u32 {
    // a0 > gamma2 || a0 < -gamma2 || (a0 == -gamma2 && a1 != 0), without branches
    let above = ((gamma2 - a0) >> 31) & 1;
    let below = ((a0 + gamma2) >> 31) & 1;
    let at_edge = (((a0 + gamma2) | -(a0 + gamma2)) >> 31) + 1; // 1 iff a0 == -gamma2
    let nonzero = ((a1 | -a1) >> 31) & 1;
    (above | below | (at_edge & nonzero)) as u32
}

/// High bits of a, corrected by the hint.
#[inline(always)]
pub fn use_hint(a: i32, hint: u32, gamma2: i32) -> i32 {
    let (a1, a0) = decompose(a, gamma2);
    if hint == 0 {
        return a1;
    }
    if gamma2 == (Q - 1) / 32 {
        if a0 > 0 {
            (a1 + 1) & 15
        } else {
            (a1 - 1) & 15
        }
    } else if a0 > 0 {
        if a1 == 43 {
            0
        } else {
            a1 + 1
        }
    } else if a1 == 0 {
        43
    } else {
        a1 - 1
    }
}
