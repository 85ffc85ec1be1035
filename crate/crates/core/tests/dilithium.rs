//! Dilithium ring arithmetic and rounding against independent oracles, and
//! signature properties.

use pqbench::dilithium::{
    decompose, make_hint, power2round, sample_in_ball, use_hint, Dilithium, DilithiumLevel, RingElement, SigningMode,
    D, N, Q,
};
use pqbench::keccak::{xof, XofVariant};
use pqbench::{Backend, Domain};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const QI: i64 = Q as i64;
const GAMMA2: [i32; 2] = [(Q - 1) / 88, (Q - 1) / 32];

fn backends() -> Vec<Backend> {
    Backend::ALL.into_iter().filter(|b| b.is_available()).collect()
}

fn schoolbook(a: &[u32; N], b: &[u32; N]) -> [u32; N] {
    let mut acc = [0i128; N];
    for i in 0..N {
        for j in 0..N {
            let t = a[i] as i128 * b[j] as i128;
            if i + j < N {
                acc[i + j] += t;
            } else {
                acc[i + j - N] -= t;
            }
        }
    }
    acc.map(|x| x.rem_euclid(QI as i128) as u32)
}

/// Centered remainder in (-m/2, m/2].
fn mod_pm(a: i64, m: i64) -> i64 {
    let r = a.rem_euclid(m);
    if r > m / 2 {
        r - m
    } else {
        r
    }
}

/// High/low split by definition, including the wrap at q - 1.
fn decompose_oracle(a: i32, gamma2: i32) -> (i32, i32) {
    let (a, alpha) = (a as i64, 2 * gamma2 as i64);
    let a0 = mod_pm(a, alpha);
    if a - a0 == QI - 1 {
        (0, (a0 - 1) as i32)
    } else {
        (((a - a0) / alpha) as i32, a0 as i32)
    }
}

/// Challenge sampler by definition: 8 sign bytes, then an inside-out shuffle
/// driven by rejection-sampled bytes from the same SHAKE256 stream.
fn ball_oracle(seed: &[u8], tau: usize) -> [i32; N] {
    let stream = xof(XofVariant::Shake256, seed, 4096);
    let signs = u64::from_le_bytes(stream[..8].try_into().unwrap());
    let mut bytes = stream[8..].iter();
    let mut c = [0i32; N];
    for (k, i) in (N - tau..N).enumerate() {
        let j = loop {
            let b = *bytes.next().unwrap() as usize;
            if b <= i {
                break b;
            }
        };
        c[i] = c[j];
        c[j] = if (signs >> k) & 1 == 1 { -1 } else { 1 };
    }
    c
}

fn poly() -> impl Strategy<Value = [u32; N]> {
    prop::collection::vec(0u32..Q as u32, N).prop_map(|v| v.try_into().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ntt_product_is_negacyclic_convolution(a in poly(), b in poly()) {
        let want = schoolbook(&a, &b);
        for backend in backends() {
            let fa = RingElement::from_coeffs(&a, Domain::Normal).unwrap().ntt_with(backend).unwrap();
            let fb = RingElement::from_coeffs(&b, Domain::Normal).unwrap().ntt_with(backend).unwrap();
            let prod = fa.mul_ntt_with(&fb, backend).unwrap().inv_ntt_with(backend).unwrap();
            prop_assert_eq!(prod.coeffs(), want);
        }
    }

    #[test]
    fn ntt_inverts(a in poly()) {
        for backend in backends() {
            let p = RingElement::from_coeffs(&a, Domain::Normal).unwrap();
            prop_assert_eq!(p.ntt_with(backend).unwrap().inv_ntt_with(backend).unwrap().coeffs(), a);
        }
    }

    #[test]
    fn sample_in_ball_matches_definition(seed in any::<[u8; 32]>(), ti in 0usize..3) {
        let tau = [39, 49, 60][ti];
        prop_assert_eq!(sample_in_ball(&seed, tau).unwrap(), ball_oracle(&seed, tau));
    }

    #[test]
    fn sign_verify_roundtrip(seed in any::<[u8; 32]>(), msg in prop::collection::vec(any::<u8>(), 0..200), li in 0usize..3) {
        let level = DilithiumLevel::ALL[li];
        for backend in backends() {
            let dsa = Dilithium::new(level, backend).unwrap();
            let kp = dsa.keygen(&seed).unwrap();
            let sig = dsa.sign(kp.secret.as_bytes(), &msg, SigningMode::Deterministic).unwrap();
            prop_assert_eq!(&sig, &dsa.sign(kp.secret.as_bytes(), &msg, SigningMode::Deterministic).unwrap());
            prop_assert!(dsa.verify(kp.public.as_bytes(), &msg, sig.as_bytes()));
            let hedged = dsa.sign(kp.secret.as_bytes(), &msg, SigningMode::Randomized(&seed)).unwrap();
            prop_assert!(dsa.verify(kp.public.as_bytes(), &msg, hedged.as_bytes()));
        }
    }

    #[test]
    fn tampering_is_rejected(seed in any::<[u8; 32]>(), pos in any::<prop::sample::Index>(), bit in 0u8..8) {
        let dsa = Dilithium::new(DilithiumLevel::Dilithium2, Backend::Reference).unwrap();
        let kp = dsa.keygen(&seed).unwrap();
        let msg = b"attack at dawn";
        let sig = dsa.sign(kp.secret.as_bytes(), msg, SigningMode::Deterministic).unwrap();
        let mut bad_sig = sig.as_bytes().to_vec();
        let i = pos.index(bad_sig.len());
        bad_sig[i] ^= 1 << bit;
        prop_assert!(!dsa.verify(kp.public.as_bytes(), msg, &bad_sig));
        let mut bad_msg = msg.to_vec();
        let i = pos.index(bad_msg.len());
        bad_msg[i] ^= 1 << bit;
        prop_assert!(!dsa.verify(kp.public.as_bytes(), &bad_msg, sig.as_bytes()));
    }
}

#[test]
fn power2round_all_residues() {
    for a in 0..Q {
        let (a1, a0) = power2round(a);
        assert_eq!(a1 * (1 << D) + a0, a);
        assert!(-(1 << (D - 1)) < a0 && a0 <= 1 << (D - 1), "a={a}");
    }
}

#[test]
fn decompose_all_residues() {
    for gamma2 in GAMMA2 {
        let m = (Q - 1) / (2 * gamma2);
        for a in 0..Q {
            let (a1, a0) = decompose(a, gamma2);
            assert_eq!((a1, a0), decompose_oracle(a, gamma2), "a={a} gamma2={gamma2}");
            assert!((0..m).contains(&a1));
            assert_eq!((a1 as i64 * 2 * gamma2 as i64 + a0 as i64).rem_euclid(QI), a as i64);
        }
    }
}

#[test]
fn hints_recover_high_bits() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x4e17);
    for gamma2 in GAMMA2 {
        let m = (Q - 1) / (2 * gamma2);
        for _ in 0..500_000 {
            let w: i32 = rng.gen_range(0..Q);
            let e: i32 = rng.gen_range(-gamma2 + 1..gamma2);
            let (w1, w0) = decompose(w, gamma2);
            let shifted = (w + e).rem_euclid(Q);
            let h = make_hint(w0 + e, w1, gamma2);
            assert!(h <= 1);
            let got = use_hint(shifted, h, gamma2);
            assert_eq!(got, w1, "w={w} e={e} gamma2={gamma2}");
            assert!((0..m).contains(&use_hint(shifted, 1 - h, gamma2)));
        }
    }
}

#[test]
fn challenge_weight() {
    for tau in [39usize, 49, 60] {
        for s in 0u32..1000 {
            let c = sample_in_ball(&s.to_le_bytes(), tau).unwrap();
            assert_eq!(c.iter().filter(|&&x| x != 0).count(), tau);
            assert!(c.iter().all(|&x| (-1..=1).contains(&x)));
        }
    }
    assert!(sample_in_ball(b"x", 40).is_err());
}

#[test]
fn published_sizes() {
    let want = [(1312, 2528, 2420), (1952, 4000, 3293), (2592, 4864, 4595)];
    for (level, (pk, sk, sig)) in DilithiumLevel::ALL.into_iter().zip(want) {
        let dsa = Dilithium::new(level, Backend::Reference).unwrap();
        let kp = dsa.keygen(&[9; 32]).unwrap();
        let s = dsa.sign(kp.secret.as_bytes(), b"", SigningMode::Deterministic).unwrap();
        assert_eq!((kp.public.len(), kp.secret.len(), s.len()), (pk, sk, sig));
    }
}

#[test]
fn malformed_inputs() {
    let dsa = Dilithium::new(DilithiumLevel::Dilithium3, Backend::Reference).unwrap();
    assert!(dsa.keygen(&[0; 31]).is_err());
    let kp = dsa.keygen(&[0; 32]).unwrap();
    assert!(dsa.sign(&kp.secret.as_bytes()[1..], b"m", SigningMode::Deterministic).is_err());
    let sig = dsa.sign(kp.secret.as_bytes(), b"m", SigningMode::Deterministic).unwrap();
    let mut long = sig.as_bytes().to_vec();
    long.push(0);
    assert!(!dsa.verify(kp.public.as_bytes(), b"m", &long));
    assert!(!dsa.verify(&kp.public.as_bytes()[1..], b"m", sig.as_bytes()));
    // a signature from another key fails
    let other = dsa.keygen(&[1; 32]).unwrap();
    assert!(!dsa.verify(other.public.as_bytes(), b"m", sig.as_bytes()));
}
