//! Public polynomial type for Z_8380417[X]/(X^256 + 1) with canonical
//! coefficients in [0, q) and a tracked transform domain.

use super::params::{N, Q};
use super::poly::Poly;
use super::reduce::{freeze, montgomery_reduce};
use crate::arch::{Backend, Engine};
use crate::{Domain, Error, Result};

/// 2^64 mod q: a Montgomery product with it multiplies by 2^32.
const MONT_SQ: i64 = 2365951;

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
    pub fn from_coeffs(coeffs: &[u32], domain: Domain) -> Result<Self> {
        if coeffs.len() != N {
            return Err(Error::length("coefficients", N, coeffs.len()));
        }
        let mut p = Poly::default();
        for (dst, &c) in p.c.iter_mut().zip(coeffs) {
            if c >= Q as u32 {
                return Err(Error::InvalidParameter(format!("coefficient {c} is not below {Q}")));
            }
            *dst = c as i32;
        }
        Ok(RingElement { coeffs: p, domain })
    }

    pub fn coeffs(&self) -> [u32; N] {
        self.coeffs.c.map(|c| c as u32)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    fn canonical(mut p: Poly, domain: Domain) -> Self {
        for x in p.c.iter_mut() {
            *x = freeze(*x);
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
        for x in p.c.iter_mut() {
            *x = montgomery_reduce(*x as i64);
        }
        Ok(Self::canonical(p, Domain::Normal))
    }

    /// Product of two NTT-domain elements.
    pub fn mul_ntt(&self, other: &Self) -> Result<Self> {
        self.mul_ntt_with(other, Backend::Reference)
    }

    pub fn mul_ntt_with(&self, other: &Self, backend: Backend) -> Result<Self> {
        self.domain.expect(Domain::Ntt)?;
        other.domain.expect(Domain::Ntt)?;
        let mut p = match Engine::new(backend)? {
            Engine::Reference => self.coeffs.pointwise_montgomery(&other.coeffs),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::pointwise_acc(t, &[self.coeffs], &[other.coeffs]),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        };
        for x in p.c.iter_mut() {
            *x = montgomery_reduce(*x as i64 * MONT_SQ);
        }
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
        let mut p = self.coeffs;
        p.sub_assign(&other.coeffs);
        Ok(Self::canonical(p, self.domain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mont_sq_constant() {
        assert_eq!(MONT_SQ, ((1i128 << 64) % Q as i128) as i64);
    }

    #[test]
    fn domain_is_enforced() {
        let z = RingElement::zero(Domain::Normal);
        assert!(z.inv_ntt().is_err());
        assert!(z.mul_ntt(&z).is_err());
        assert!(RingElement::from_coeffs(&[Q as u32; N], Domain::Normal).is_err());
    }
}
