//! Branch-free helpers for secret-dependent comparisons and selection.

use std::hint::black_box;

/// Returns 1 if `a != b` and 0 otherwise, touching every byte of both slices.
/// Slices of different length compare unequal; only the lengths leak.
pub fn ct_ne(a: &[u8], b: &[u8]) -> u8 {
    if a.len() != b.len() {
        return 1;
    }
    let mut acc = 0u8;
    for (x, y) in a.iter().zip(b) {
        acc |= x ^ y;
    }
    let acc = black_box(acc) as u64;
    (acc.wrapping_neg() >> 63) as u8
}

pub fn ct_eq(a: &[u8], b: &[u8]) -> bool {
    ct_ne(a, b) == 0
}

/// Overwrites `dst` with `src` when `flag == 1`, leaves it alone when `flag == 0`.
pub fn ct_cmov(dst: &mut [u8], src: &[u8], flag: u8) {
    debug_assert_eq!(dst.len(), src.len());
    let mask = black_box(flag).wrapping_neg();
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= mask & (*d ^ *s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ne_flags_any_single_difference() {
        let a = [0x5au8; 64];
        assert_eq!(ct_ne(&a, &a), 0);
        for i in 0..64 {
            for bit in 0..8 {
                let mut b = a;
                b[i] ^= 1 << bit;
                assert_eq!(ct_ne(&a, &b), 1);
            }
        }
        assert_eq!(ct_ne(&a, &a[..63]), 1);
    }

    #[test]
    fn cmov_selects() {
        let mut d = [1u8, 2, 3];
        ct_cmov(&mut d, &[9, 9, 9], 0);
        assert_eq!(d, [1, 2, 3]);
        ct_cmov(&mut d, &[9, 8, 7], 1);
        assert_eq!(d, [9, 8, 7]);
    }
}
