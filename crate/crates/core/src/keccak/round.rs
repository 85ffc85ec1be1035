//! One Keccak-f[1600] round written out lane by lane over [`Lane`], so the
//! scalar and four-way permutations share a single transcription.

pub(crate) trait Lane: Copy {
    fn xor(self, other: Self) -> Self;
    /// `!self & other`
    fn andnot(self, other: Self) -> Self;
    /// Rotation left by `LEFT`; `RIGHT` is always `64 - LEFT`.
    fn rotl<const LEFT: i32, const RIGHT: i32>(self) -> Self;
}

impl Lane for u64 {
    #[inline(always)]
    fn xor(self, other: Self) -> Self {
        self ^ other
    }

    #[inline(always)]
    fn andnot(self, other: Self) -> Self {
        !self & other
    }

    #[inline(always)]
    fn rotl<const LEFT: i32, const RIGHT: i32>(self) -> Self {
        self.rotate_left(LEFT as u32)
    }
}

/// theta, rho, pi, chi and iota with round constant `rc`.
#[inline(always)]
pub(crate) fn round<T: Lane>(a: &mut [T; 25], rc: T) {
    let c0 = a[0].xor(a[5]).xor(a[10]).xor(a[15]).xor(a[20]);
    let c1 = a[1].xor(a[6]).xor(a[11]).xor(a[16]).xor(a[21]);
    let c2 = a[2].xor(a[7]).xor(a[12]).xor(a[17]).xor(a[22]);
    let c3 = a[3].xor(a[8]).xor(a[13]).xor(a[18]).xor(a[23]);
    let c4 = a[4].xor(a[9]).xor(a[14]).xor(a[19]).xor(a[24]);
    let d0 = c4.xor(c1.rotl::<1, 63>());
    let d1 = c0.xor(c2.rotl::<1, 63>());
    let d2 = c1.xor(c3.rotl::<1, 63>());
    let d3 = c2.xor(c4.rotl::<1, 63>());
    let d4 = c3.xor(c0.rotl::<1, 63>());
    let b0 = a[0].xor(d0);
    let b1 = a[6].xor(d1).rotl::<44, 20>();
    let b2 = a[12].xor(d2).rotl::<43, 21>();
    let b3 = a[18].xor(d3).rotl::<21, 43>();
    let b4 = a[24].xor(d4).rotl::<14, 50>();
    let b5 = a[3].xor(d3).rotl::<28, 36>();
    let b6 = a[9].xor(d4).rotl::<20, 44>();
    let b7 = a[10].xor(d0).rotl::<3, 61>();
    let b8 = a[16].xor(d1).rotl::<45, 19>();
    let b9 = a[22].xor(d2).rotl::<61, 3>();
    let b10 = a[1].xor(d1).rotl::<1, 63>();
    let b11 = a[7].xor(d2).rotl::<6, 58>();
    let b12 = a[13].xor(d3).rotl::<25, 39>();
    let b13 = a[19].xor(d4).rotl::<8, 56>();
    let b14 = a[20].xor(d0).rotl::<18, 46>();
    let b15 = a[4].xor(d4).rotl::<27, 37>();
    let b16 = a[5].xor(d0).rotl::<36, 28>();
    let b17 = a[11].xor(d1).rotl::<10, 54>();
    let b18 = a[17].xor(d2).rotl::<15, 49>();
    let b19 = a[23].xor(d3).rotl::<56, 8>();
    let b20 = a[2].xor(d2).rotl::<62, 2>();
    let b21 = a[8].xor(d3).rotl::<55, 9>();
    let b22 = a[14].xor(d4).rotl::<39, 25>();
    let b23 = a[15].xor(d0).rotl::<41, 23>();
    let b24 = a[21].xor(d1).rotl::<2, 62>();
    a[0] = b0.xor(b1.andnot(b2));
    a[1] = b1.xor(b2.andnot(b3));
    a[2] = b2.xor(b3.andnot(b4));
    a[3] = b3.xor(b4.andnot(b0));
    a[4] = b4.xor(b0.andnot(b1));
    a[5] = b5.xor(b6.andnot(b7));
    a[6] = b6.xor(b7.andnot(b8));
    a[7] = b7.xor(b8.andnot(b9));
    a[8] = b8.xor(b9.andnot(b5));
    a[9] = b9.xor(b5.andnot(b6));
    a[10] = b10.xor(b11.andnot(b12));
    a[11] = b11.xor(b12.andnot(b13));
    a[12] = b12.xor(b13.andnot(b14));
    a[13] = b13.xor(b14.andnot(b10));
    a[14] = b14.xor(b10.andnot(b11));
    a[15] = b15.xor(b16.andnot(b17));
    a[16] = b16.xor(b17.andnot(b18));
    a[17] = b17.xor(b18.andnot(b19));
    a[18] = b18.xor(b19.andnot(b15));
    a[19] = b19.xor(b15.andnot(b16));
    a[20] = b20.xor(b21.andnot(b22));
    a[21] = b21.xor(b22.andnot(b23));
    a[22] = b22.xor(b23.andnot(b24));
    a[23] = b23.xor(b24.andnot(b20));
    a[24] = b24.xor(b20.andnot(b21));
    a[0] = a[0].xor(rc);
}
