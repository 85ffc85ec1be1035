//! Public polynomial type for Z_3329[X]/(X^256 + 1) with exact, canonical
//! semantics: every coefficient is in [0, q) after each operation and the
//! transform domain is tracked.

use super::params::{N, Q};
use super::poly::{cbd, Poly};
use super::reduce::{barrett_reduce, caddq, montgomery_reduce};
use crate::arch::{Backend, Engine};
use crate::{Domain, Error, Result};

/// Bit depths accepted by [`RingElement::compress`].
pub const COMPRESSION_DEPTHS: [u32; 5] = [1, 4, 5, 10, 11];

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    coeffs: Poly,
    domain: Domain,
}

impl RingElement {
    pub fn zero(domain: Domain) -> Self {
        RingElement {
            coeffs: Poly::default(),
            domain,
        }
    }

    /// Takes 256 coefficients, each below q.
    pub fn from_coeffs(coeffs: &[u16], domain: Domain) -> Result<Self> {
        if coeffs.len() != N {
            return Err(Error::length("coefficients", N, coeffs.len()));
        }
        let mut p = Poly::default();
        for (dst, &c) in p.c.iter_mut().zip(coeffs) {
            if c >= Q as u16 {
                return Err(Error::InvalidParameter(format!("coefficient {c} is not below {Q}")));
            }
            *dst = c as i16;
        }
        Ok(RingElement { coeffs: p, domain })
    }

    pub fn coeffs(&self) -> [u16; N] {
        self.coeffs.c.map(|c| c as u16)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    fn canonical(mut p: Poly, domain: Domain) -> Self {
        for x in p.c.iter_mut() {
            *x = caddq(barrett_reduce(*x));
        }
        RingElement { coeffs: p, domain }
    }

    pub fn ntt(&self) -> Result<Self> {
        self.ntt_with(Backend::Reference)
    }

    pub fn ntt_with(&self, backend: Backend) -> Result<Self> {
        self.domain.expect(Domain::Normal)?;
        let mut p = self.coeffs;
        match Engine::new(backend)? {
            Engine::Reference => p.ntt(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::ntt(t, &mut p),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
        Ok(Self::canonical(p, Domain::Ntt))
    }

    pub fn inv_ntt(&self) -> Result<Self> {
        self.inv_ntt_with(Backend::Reference)
    }

    pub fn inv_ntt_with(&self, backend: Backend) -> Result<Self> {
        self.domain.expect(Domain::Ntt)?;
        let mut p = self.coeffs;
        match Engine::new(backend)? {
            Engine::Reference => p.invntt_tomont(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::invntt(t, &mut p),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
        // strip the Montgomery factor the transform leaves behind
        for x in p.c.iter_mut() {
            *x = montgomery_reduce(*x as i32);
        }
        Ok(Self::canonical(p, Domain::Normal))
    }

    /// Product of two NTT-domain elements, i.e. the NTT of the negacyclic
    /// product of their preimages.
    pub fn mul_ntt(&self, other: &Self) -> Result<Self> {
        self.mul_ntt_with(other, Backend::Reference)
    }

    pub fn mul_ntt_with(&self, other: &Self, backend: Backend) -> Result<Self> {
        self.domain.expect(Domain::Ntt)?;
        other.domain.expect(Domain::Ntt)?;
        let mut p = match Engine::new(backend)? {
            Engine::Reference => self.coeffs.basemul_montgomery(&other.coeffs),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::basemul_acc(t, &[self.coeffs], &[other.coeffs]),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        };
        p.reduce();
        p.tomont();
        Ok(Self::canonical(p, Domain::Ntt))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        other.domain.expect(self.domain)?;
        let mut p = self.coeffs;
        p.add_assign(&other.coeffs);
        Ok(Self::canonical(p, self.domain))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        other.domain.expect(self.domain)?;
        let mut p = other.coeffs;
        p.sub_from(&self.coeffs);
        Ok(Self::canonical(p, self.domain))
    }

    /// Packs round(2^d * c / q) mod 2^d for every coefficient, `d` bits each.
    pub fn compress(&self, d: u32) -> Result<Vec<u8>> {
        check_depth(d)?;
        let mut out = vec![0u8; N * d as usize / 8];
        self.coeffs.compress(d, &mut out);
        Ok(out)
    }

    pub fn decompress(bytes: &[u8], d: u32) -> Result<Self> {
        check_depth(d)?;
        let expected = N * d as usize / 8;
        if bytes.len() != expected {
            return Err(Error::length("compressed polynomial", expected, bytes.len()));
        }
        Ok(Self::canonical(Poly::decompress(bytes, d), Domain::Normal))
    }

    /// Centered binomial sample with parameter `eta` from `64 * eta` bytes.
    pub fn cbd_sample(eta: usize, stream: &[u8]) -> Result<Self> {
        if eta != 2 && eta != 3 {
            return Err(Error::InvalidParameter(format!("eta must be 2 or 3, got {eta}")));
        }
        if stream.len() != 64 * eta {
            return Err(Error::length("noise stream", 64 * eta, stream.len()));
        }
        Ok(Self::canonical(cbd(eta, stream), Domain::Normal))
    }
}

fn check_depth(d: u32) -> Result<()> {
    if COMPRESSION_DEPTHS.contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("unsupported compression depth {d}")))
    }
}
