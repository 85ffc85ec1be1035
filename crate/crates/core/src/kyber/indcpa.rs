//! The IND-CPA public-key encryption underlying the KEM, written once over
//! [`Engine`] so both backends share every byte-level step.

use super::params::{KyberParams, N, POLY_BYTES, SYMBYTES};
use super::poly::{getnoise, sample_uniform, Poly};
use crate::arch::Engine;
use crate::keccak::{sha3_512, shake128_reader};

pub(crate) type PolyVec = Vec<Poly>;

impl Engine {
    fn ntt(self, p: &mut Poly) {
        match self {
            Engine::Reference => p.ntt(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::ntt(t, p),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
        p.reduce();
    }

    fn invntt(self, p: &mut Poly) {
        match self {
            Engine::Reference => p.invntt_tomont(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::invntt(t, p),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    /// Sum of NTT-domain products, reduced; carries a factor 2^-16.
    fn basemul_acc(self, a: &[Poly], b: &[Poly]) -> Poly {
        let mut r = match self {
            Engine::Reference => {
                let mut r = a[0].basemul_montgomery(&b[0]);
                for (x, y) in a.iter().zip(b).skip(1) {
                    r.add_assign(&x.basemul_montgomery(y));
                }
                r
            }
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::basemul_acc(t, a, b),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        };
        r.reduce();
        r
    }

    /// Matrix expanded from `seed`. Row i, column j is sampled from
    /// SHAKE128(seed || j || i), or SHAKE128(seed || i || j) when transposed.
    fn gen_matrix(self, seed: &[u8; SYMBYTES], k: usize, transposed: bool) -> Vec<PolyVec> {
        let nonce = |i: usize, j: usize| -> [u8; 2] {
            if transposed {
                [i as u8, j as u8]
            } else {
                [j as u8, i as u8]
            }
        };
        match self {
            Engine::Reference => (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| sample_uniform(&mut shake128_reader(&[seed, &nonce(i, j)])))
                        .collect()
                })
                .collect(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => {
                let nonces: Vec<[u8; 2]> = (0..k * k).map(|x| nonce(x / k, x % k)).collect();
                let flat = super::avx2::sample_uniform_many(t, seed, &nonces);
                flat.chunks(k).map(|row| row.to_vec()).collect()
            }
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }

    /// One noise polynomial per `(eta, nonce)` spec, in order.
    fn noise(self, seed: &[u8; SYMBYTES], specs: &[(usize, u8)]) -> PolyVec {
        match self {
            Engine::Reference => specs.iter().map(|&(eta, n)| getnoise(eta, seed, n)).collect(),
            #[cfg(target_arch = "x86_64")]
            Engine::Avx2(t) => super::avx2::noise_many(t, seed, specs),
            #[cfg(not(target_arch = "x86_64"))]
            Engine::Avx2(_) => unreachable!(),
        }
    }
}

fn polyvec_to_bytes(v: &[Poly], out: &mut [u8]) {
    for (p, chunk) in v.iter().zip(out.chunks_exact_mut(POLY_BYTES)) {
        p.to_bytes(chunk);
    }
}

fn polyvec_from_bytes(b: &[u8], k: usize) -> PolyVec {
    b.chunks_exact(POLY_BYTES).take(k).map(Poly::from_bytes).collect()
}

/// Writes the IND-CPA key pair derived from `d` into `pk` and `sk`.
pub(crate) fn keypair(e: Engine, p: &KyberParams, d: &[u8; SYMBYTES], pk: &mut [u8], sk: &mut [u8]) {
    let g = sha3_512(d);
    let public_seed: [u8; SYMBYTES] = g[..SYMBYTES].try_into().unwrap();
    let noise_seed: [u8; SYMBYTES] = g[SYMBYTES..].try_into().unwrap();
    let a = e.gen_matrix(&public_seed, p.k, false);
    let specs: Vec<(usize, u8)> = (0..2 * p.k).map(|i| (p.eta1, i as u8)).collect();
    let mut s = e.noise(&noise_seed, &specs);
    let mut err = s.split_off(p.k);
    for x in s.iter_mut().chain(err.iter_mut()) {
        e.ntt(x);
    }
    let mut t: PolyVec = a.iter().map(|row| e.basemul_acc(row, &s)).collect();
    for (ti, ei) in t.iter_mut().zip(&err) {
        ti.tomont();
        ti.add_assign(ei);
        ti.reduce();
    }
    polyvec_to_bytes(&s, sk);
    polyvec_to_bytes(&t, &mut pk[..p.polyvec_bytes()]);
    pk[p.polyvec_bytes()..].copy_from_slice(&public_seed);
}

/// Deterministic encryption of `msg` under `pk` with randomness `coins`.
pub(crate) fn encrypt(
    e: Engine,
    p: &KyberParams,
    pk: &[u8],
    msg: &[u8; SYMBYTES],
    coins: &[u8; SYMBYTES],
    ct: &mut [u8],
) {
    let t = polyvec_from_bytes(&pk[..p.polyvec_bytes()], p.k);
    let seed: [u8; SYMBYTES] = pk[p.polyvec_bytes()..].try_into().unwrap();
    let m = Poly::from_msg(msg);
    let at = e.gen_matrix(&seed, p.k, true);
    let specs: Vec<(usize, u8)> =
        (0..2 * p.k + 1).map(|i| (if i < p.k { p.eta1 } else { p.eta2 }, i as u8)).collect();
    let mut r = e.noise(coins, &specs);
    let mut e12 = r.split_off(p.k);
    let e2 = e12.pop().unwrap();
    for x in r.iter_mut() {
        e.ntt(x);
    }
    let mut u: PolyVec = at.iter().map(|row| e.basemul_acc(row, &r)).collect();
    let mut v = e.basemul_acc(&t, &r);
    for (ui, e1) in u.iter_mut().zip(&e12) {
        e.invntt(ui);
        ui.add_assign(e1);
        ui.reduce();
    }
    e.invntt(&mut v);
    v.add_assign(&e2);
    v.add_assign(&m);
    v.reduce();

    let (cu, cv) = ct.split_at_mut(p.polyvec_compressed_bytes());
    let per_poly = N * p.du as usize / 8;
    for (ui, chunk) in u.iter().zip(cu.chunks_exact_mut(per_poly)) {
        ui.compress(p.du, chunk);
    }
    v.compress(p.dv, cv);
}

pub(crate) fn decrypt(e: Engine, p: &KyberParams, sk: &[u8], ct: &[u8]) -> [u8; SYMBYTES] {
    let (cu, cv) = ct.split_at(p.polyvec_compressed_bytes());
    let per_poly = N * p.du as usize / 8;
    let mut u: PolyVec = cu.chunks_exact(per_poly).map(|c| Poly::decompress(c, p.du)).collect();
    let v = Poly::decompress(cv, p.dv);
    let s = polyvec_from_bytes(sk, p.k);
    for x in u.iter_mut() {
        e.ntt(x);
    }
    let mut mp = e.basemul_acc(&s, &u);
    e.invntt(&mut mp);
    mp.sub_from(&v);
    mp.reduce();
    mp.to_msg()
}
