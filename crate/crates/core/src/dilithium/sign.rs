//! Key generation, signing and verification.

use rand::rngs::OsRng;
use rand::RngCore;

use super::params::{DilithiumLevel, DilithiumParams, CRHBYTES, N, SEEDBYTES};
use super::poly::{challenge, uniform, uniform_eta, uniform_gamma1, Poly};
use super::rounding::{decompose, make_hint, power2round, use_hint};
use crate::arch::{Backend, Engine};
use crate::keccak::{shake256_into, Sponge};
use crate::{Error, Result};

/// Signing attempts allowed before declaring a defect. The expected count is
/// below 6 for every level.
pub const MAX_SIGNING_ATTEMPTS: u32 = 1000;

type PolyVec = Vec<Poly>;

impl Engine {
    fn ntt32(self, p: &mut Poly) {
        match self {
            Engine::Reference => p.ntt(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::ntt(t, p),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    fn invntt32(self, p: &mut Poly) {
        match self {
            Engine::Reference => p.invntt_tomont(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::invntt(t, p),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    fn pointwise(self, a: &Poly, b: &Poly) -> Poly {
        match self {
            Engine::Reference => a.pointwise_montgomery(b),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::pointwise_acc(t, std::slice::from_ref(a), std::slice::from_ref(b)),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    fn pointwise_acc(self, a: &[Poly], b: &[Poly]) -> Poly {
        match self {
            Engine::Reference => {
                let mut r = a[0].pointwise_montgomery(&b[0]);
                for (x, y) in a.iter().zip(b).skip(1) {
                    r.add_assign(&x.pointwise_montgomery(y));
                }
                r
            }
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::pointwise_acc(t, a, b),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    /// Row i, column j sampled from SHAKE128(rho || j || i) (nonce 256 i + j).
    fn expand_matrix(self, rho: &[u8; SEEDBYTES], k: usize, l: usize) -> Vec<PolyVec> {
        let nonces: Vec<u16> = (0..k * l).map(|x| (((x / l) << 8) + x % l) as u16).collect();
        let flat = match self {
            Engine::Reference => nonces.iter().map(|&n| uniform(rho, n)).collect(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::uniform_many(t, rho, &nonces),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        };
        flat.chunks(l).map(|row: &[Poly]| row.to_vec()).collect()
    }

    fn eta_vec(self, eta: i32, seed: &[u8; CRHBYTES], first: u16, count: usize) -> PolyVec {
        match self {
            Engine::Reference => (0..count).map(|i| uniform_eta(eta, seed, first + i as u16)).collect(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::uniform_eta_many(t, eta, seed, first, count),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    fn gamma1_vec(self, p: &DilithiumParams, seed: &[u8; CRHBYTES], first: u16) -> PolyVec {
        match self {
            Engine::Reference => (0..p.l).map(|i| uniform_gamma1(p, seed, first + i as u16)).collect(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::uniform_gamma1_many(t, p, seed, first),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    fn matrix_mul(self, a: &[PolyVec], v: &[Poly]) -> PolyVec {
        a.iter().map(|row| self.pointwise_acc(row, v)).collect()
    }
}

macro_rules! byte_newtype {
    ($name:ident) => {
        #[derive(Clone, PartialEq, Eq)]
        pub struct $name(Vec<u8>);

        impl $name {
            pub fn as_bytes(&self) -> &[u8] {
                &self.0
            }

            pub fn into_bytes(self) -> Vec<u8> {
                self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }
        }

        impl AsRef<[u8]> for $name {
            fn as_ref(&self) -> &[u8] {
                &self.0
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, concat!(stringify!($name), "({} bytes)"), self.0.len())
            }
        }
    };
}

byte_newtype!(DilithiumPublicKey);
byte_newtype!(DilithiumSecretKey);
byte_newtype!(DilithiumSignature);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilithiumKeyPair {
    pub public: DilithiumPublicKey,
    pub secret: DilithiumSecretKey,
}

/// How the per-signature mask seed is derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SigningMode<'a> {
    /// From the secret key and message only: equal inputs give equal signatures.
    #[default]
    Deterministic,
    /// Additionally mixes in 32 caller-supplied random bytes.
    Randomized(&'a [u8; 32]),
}

/// Dilithium at one level on one backend. Cheap to copy; holds no key material.
#[derive(Debug, Clone, Copy)]
pub struct Dilithium {
    params: DilithiumParams,
    engine: Engine,
}

impl Dilithium {
    pub fn new(level: DilithiumLevel, backend: Backend) -> Result<Self> {
        Ok(Dilithium {
            params: level.params(),
            engine: Engine::new(backend)?,
        })
    }

    pub fn params(&self) -> &DilithiumParams {
        &self.params
    }

    pub fn level(&self) -> DilithiumLevel {
        self.params.level
    }

    pub fn keygen(&self, seed: &[u8]) -> Result<DilithiumKeyPair> {
        let mut pk = vec![0u8; self.params.public_key_bytes()];
        let mut sk = vec![0u8; self.params.secret_key_bytes()];
        self.keygen_into(seed, &mut pk, &mut sk)?;
        Ok(DilithiumKeyPair {
            public: DilithiumPublicKey(pk),
            secret: DilithiumSecretKey(sk),
        })
    }

    pub fn keygen_into(&self, seed: &[u8], pk: &mut [u8], sk: &mut [u8]) -> Result<()> {
        let p = &self.params;
        let e = self.engine;
        if seed.len() != SEEDBYTES {
            return Err(Error::length("seed", SEEDBYTES, seed.len()));
        }
        check_len("public key buffer", p.public_key_bytes(), pk)?;
        check_len("secret key buffer", p.secret_key_bytes(), sk)?;

        let mut seedbuf = [0u8; 2 * SEEDBYTES + CRHBYTES];
        shake256_into(&[seed], &mut seedbuf);
        let rho: [u8; SEEDBYTES] = seedbuf[..SEEDBYTES].try_into().unwrap();
        let rhoprime: [u8; CRHBYTES] = seedbuf[SEEDBYTES..SEEDBYTES + CRHBYTES].try_into().unwrap();
        let key = &seedbuf[SEEDBYTES + CRHBYTES..];

        let a = e.expand_matrix(&rho, p.k, p.l);
        let s1 = e.eta_vec(p.eta, &rhoprime, 0, p.l);
        let s2 = e.eta_vec(p.eta, &rhoprime, p.l as u16, p.k);
        let mut s1hat = s1.clone();
        for x in s1hat.iter_mut() {
            e.ntt32(x);
        }
        let mut t = e.matrix_mul(&a, &s1hat);
        let mut t0 = vec![Poly::default(); p.k];
        for ((ti, t0i), s2i) in t.iter_mut().zip(t0.iter_mut()).zip(&s2) {
            ti.reduce();
            e.invntt32(ti);
            ti.add_assign(s2i);
            ti.caddq();
            for (hi, lo) in ti.c.iter_mut().zip(t0i.c.iter_mut()) {
                (*hi, *lo) = power2round(*hi);
            }
        }

        pk[..SEEDBYTES].copy_from_slice(&rho);
        for (ti, chunk) in t.iter().zip(pk[SEEDBYTES..].chunks_exact_mut(DilithiumParams::POLY_T1_BYTES)) {
            ti.pack_t1(chunk);
        }
        let mut tr = [0u8; SEEDBYTES];
        shake256_into(&[pk], &mut tr);

        let (head, rest) = sk.split_at_mut(3 * SEEDBYTES);
        head[..SEEDBYTES].copy_from_slice(&rho);
        head[SEEDBYTES..2 * SEEDBYTES].copy_from_slice(key);
        head[2 * SEEDBYTES..].copy_from_slice(&tr);
        let (eta_part, t0_part) = rest.split_at_mut((p.l + p.k) * p.poly_eta_bytes());
        for (x, chunk) in s1.iter().chain(&s2).zip(eta_part.chunks_exact_mut(p.poly_eta_bytes())) {
            x.pack_eta(p, chunk);
        }
        for (x, chunk) in t0.iter().zip(t0_part.chunks_exact_mut(DilithiumParams::POLY_T0_BYTES)) {
            x.pack_t0(chunk);
        }
        Ok(())
    }

    pub fn keygen_random(&self) -> Result<DilithiumKeyPair> {
        let mut seed = [0u8; SEEDBYTES];
        OsRng.fill_bytes(&mut seed);
        self.keygen(&seed)
    }

    pub fn sign(&self, sk: &[u8], msg: &[u8], mode: SigningMode<'_>) -> Result<DilithiumSignature> {
        let mut sig = vec![0u8; self.params.signature_bytes()];
        self.sign_into(sk, msg, mode, &mut sig)?;
        Ok(DilithiumSignature(sig))
    }

    /// Signs with fresh OS randomness.
    pub fn sign_random(&self, sk: &[u8], msg: &[u8]) -> Result<DilithiumSignature> {
        let mut rnd = [0u8; 32];
        OsRng.fill_bytes(&mut rnd);
        self.sign(sk, msg, SigningMode::Randomized(&rnd))
    }

    /// Signs into `sig`, which must be exactly one signature long. Returns the
    /// number of attempts the rejection loop needed.
    pub fn sign_into(&self, sk: &[u8], msg: &[u8], mode: SigningMode<'_>, sig: &mut [u8]) -> Result<u32> {
        let p = &self.params;
        let e = self.engine;
        check_len("secret key", p.secret_key_bytes(), sk)?;
        check_len("signature buffer", p.signature_bytes(), sig)?;

        let rho: [u8; SEEDBYTES] = sk[..SEEDBYTES].try_into().unwrap();
        let key = &sk[SEEDBYTES..2 * SEEDBYTES];
        let tr = &sk[2 * SEEDBYTES..3 * SEEDBYTES];
        let mut off = 3 * SEEDBYTES;
        let mut take = |n: usize| {
            let s = &sk[off..off + n];
            off += n;
            s
        };
        let mut s1: PolyVec = (0..p.l).map(|_| Poly::unpack_eta(p, take(p.poly_eta_bytes()))).collect();
        let mut s2: PolyVec = (0..p.k).map(|_| Poly::unpack_eta(p, take(p.poly_eta_bytes()))).collect();
        let mut t0: PolyVec = (0..p.k)
            .map(|_| Poly::unpack_t0(take(DilithiumParams::POLY_T0_BYTES)))
            .collect();

        let mut mu = [0u8; CRHBYTES];
        shake256_into(&[tr, msg], &mut mu);
        let mut rhoprime = [0u8; CRHBYTES];
        match mode {
            SigningMode::Deterministic => shake256_into(&[key, &mu], &mut rhoprime),
            SigningMode::Randomized(rnd) => shake256_into(&[key, rnd, &mu], &mut rhoprime),
        }

        let a = e.expand_matrix(&rho, p.k, p.l);
        for x in s1.iter_mut().chain(s2.iter_mut()).chain(t0.iter_mut()) {
            e.ntt32(x);
        }

        let w1_bytes = p.k * p.poly_w1_bytes();
        let mut w1_packed = vec![0u8; w1_bytes];
        for attempt in 0..MAX_SIGNING_ATTEMPTS {
            let y = e.gamma1_vec(p, &rhoprime, (p.l as u32 * attempt) as u16);
            let mut yhat = y.clone();
            for x in yhat.iter_mut() {
                e.ntt32(x);
            }
            let mut w1 = e.matrix_mul(&a, &yhat);
            let mut w0 = vec![Poly::default(); p.k];
            for (w1i, w0i) in w1.iter_mut().zip(w0.iter_mut()) {
                w1i.reduce();
                e.invntt32(w1i);
                w1i.caddq();
                for (hi, lo) in w1i.c.iter_mut().zip(w0i.c.iter_mut()) {
                    (*hi, *lo) = decompose(*hi, p.gamma2);
                }
            }
            for (w, chunk) in w1.iter().zip(w1_packed.chunks_exact_mut(p.poly_w1_bytes())) {
                w.pack_w1(p, chunk);
            }
            let mut c_tilde = [0u8; SEEDBYTES];
            shake256_into(&[&mu, &w1_packed], &mut c_tilde);
            let mut cp = challenge(&c_tilde, p.tau);
            e.ntt32(&mut cp);

            let mut z: PolyVec = s1.iter().map(|s| e.pointwise(&cp, s)).collect();
            let mut reject = false;
            for (zi, yi) in z.iter_mut().zip(&y) {
                e.invntt32(zi);
                zi.add_assign(yi);
                zi.reduce();
                reject |= zi.exceeds(p.gamma1 - p.beta());
            }
            if reject {
                continue;
            }

            for (w0i, s2i) in w0.iter_mut().zip(&s2) {
                let mut cs2 = e.pointwise(&cp, s2i);
                e.invntt32(&mut cs2);
                w0i.sub_assign(&cs2);
                w0i.reduce();
                reject |= w0i.exceeds(p.gamma2 - p.beta());
            }
            if reject {
                continue;
            }

            let mut hints = 0usize;
            let mut h = vec![Poly::default(); p.k];
            for ((hi, w0i), (t0i, w1i)) in h.iter_mut().zip(w0.iter_mut()).zip(t0.iter().zip(&w1)) {
                let mut ct0 = e.pointwise(&cp, t0i);
                e.invntt32(&mut ct0);
                ct0.reduce();
                reject |= ct0.exceeds(p.gamma2);
                w0i.add_assign(&ct0);
                for ((bit, &lo), &hi_bits) in hi.c.iter_mut().zip(&w0i.c).zip(&w1i.c) {
                    *bit = make_hint(lo, hi_bits, p.gamma2) as i32;
                    hints += *bit as usize;
                }
            }
            if reject || hints > p.omega {
                continue;
            }

            pack_signature(p, &c_tilde, &z, &h, sig);
            return Ok(attempt + 1);
        }
        Err(Error::RejectionLimit(MAX_SIGNING_ATTEMPTS))
    }

    /// True iff `sig` is a valid signature of `msg` under `pk`. Malformed
    /// inputs of any length are rejected rather than reported as errors.
    pub fn verify(&self, pk: &[u8], msg: &[u8], sig: &[u8]) -> bool {
        let p = &self.params;
        let e = self.engine;
        if pk.len() != p.public_key_bytes() || sig.len() != p.signature_bytes() {
            return false;
        }
        let Some((c_tilde, mut z, h)) = unpack_signature(p, sig) else {
            return false;
        };
        if z.iter().any(|zi| zi.exceeds(p.gamma1 - p.beta())) {
            return false;
        }
        let rho: [u8; SEEDBYTES] = pk[..SEEDBYTES].try_into().unwrap();
        let mut t1: PolyVec = pk[SEEDBYTES..]
            .chunks_exact(DilithiumParams::POLY_T1_BYTES)
            .map(Poly::unpack_t1)
            .collect();

        let mut tr = [0u8; SEEDBYTES];
        shake256_into(&[pk], &mut tr);
        let mut mu = [0u8; CRHBYTES];
        shake256_into(&[&tr, msg], &mut mu);

        let mut cp = challenge(c_tilde, p.tau);
        let a = e.expand_matrix(&rho, p.k, p.l);
        for x in z.iter_mut() {
            e.ntt32(x);
        }
        let mut w1 = e.matrix_mul(&a, &z);
        e.ntt32(&mut cp);
        let mut buf = vec![0u8; p.k * p.poly_w1_bytes()];
        for ((w, t), (hi, chunk)) in w1
            .iter_mut()
            .zip(t1.iter_mut())
            .zip(h.iter().zip(buf.chunks_exact_mut(p.poly_w1_bytes())))
        {
            t.shiftl();
            e.ntt32(t);
            let ct1 = e.pointwise(&cp, t);
            w.sub_assign(&ct1);
            w.reduce();
            e.invntt32(w);
            w.caddq();
            for (x, &bit) in w.c.iter_mut().zip(&hi.c) {
                *x = use_hint(*x, bit as u32, p.gamma2);
            }
            w.pack_w1(p, chunk);
        }
        let mut c2 = [0u8; SEEDBYTES];
        let mut s = Sponge::shake256();
        s.absorb(&mu).absorb(&buf);
        s.finalize().squeeze(&mut c2);
        c2 == c_tilde
    }
}

fn check_len(what: &'static str, expected: usize, got: &[u8]) -> Result<()> {
    if got.len() == expected {
        Ok(())
    } else {
        Err(Error::length(what, expected, got.len()))
    }
}

fn pack_signature(p: &DilithiumParams, c_tilde: &[u8; SEEDBYTES], z: &[Poly], h: &[Poly], sig: &mut [u8]) {
    sig[..SEEDBYTES].copy_from_slice(c_tilde);
    let z_end = SEEDBYTES + p.l * p.poly_z_bytes();
    for (zi, chunk) in z.iter().zip(sig[SEEDBYTES..z_end].chunks_exact_mut(p.poly_z_bytes())) {
        zi.pack_z(p, chunk);
    }
    let hint = &mut sig[z_end..];
    hint.fill(0);
    let mut k = 0;
    for (i, hi) in h.iter().enumerate() {
        for (j, &bit) in hi.c.iter().enumerate() {
            if bit != 0 {
                hint[k] = j as u8;
                k += 1;
            }
        }
        hint[p.omega + i] = k as u8;
    }
}

/// Splits a signature into challenge seed, z and hints; `None` when the hint
/// encoding is not canonical.
fn unpack_signature<'s>(p: &DilithiumParams, sig: &'s [u8]) -> Option<(&'s [u8], PolyVec, PolyVec)> {
    let c_tilde = &sig[..SEEDBYTES];
    let z_end = SEEDBYTES + p.l * p.poly_z_bytes();
    let z = sig[SEEDBYTES..z_end]
        .chunks_exact(p.poly_z_bytes())
        .map(|c| Poly::unpack_z(p, c))
        .collect();
    let hint = &sig[z_end..];
    let mut h = vec![Poly::default(); p.k];
    let mut k = 0usize;
    for (i, hi) in h.iter_mut().enumerate() {
        let end = hint[p.omega + i] as usize;
        if end < k || end > p.omega {
            return None;
        }
        for j in k..end {
            if j > k && hint[j] <= hint[j - 1] {
                return None;
            }
            hi.c[hint[j] as usize] = 1;
        }
        k = end;
    }
    if hint[k..p.omega].iter().any(|&b| b != 0) {
        return None;
    }
    Some((c_tilde, z, h))
}

/// Exactly `tau` coefficients in {-1, +1}, sampled from SHAKE256(seed).
pub fn sample_in_ball(seed: &[u8], tau: usize) -> Result<[i32; N]> {
    if ![39, 49, 60].contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau must be 39, 49 or 60, got {tau}")));
    }
    Ok(challenge(seed, tau).c)
}
