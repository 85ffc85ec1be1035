//! The CCA-secure KEM: keys, encapsulation and decapsulation with implicit
//! rejection.

use rand::rngs::OsRng;
use rand::RngCore;

use super::indcpa;
use super::params::{KyberLevel, KyberParams, SHARED_SECRET_BYTES, SYMBYTES};
use crate::arch::{Backend, Engine};
use crate::ct::{ct_cmov, ct_ne};
use crate::keccak::{sha3_256, sha3_512, shake256_into};
use crate::{Error, Result};

macro_rules! byte_newtype {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
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

byte_newtype!(KyberPublicKey);
byte_newtype!(KyberSecretKey);
byte_newtype!(KyberCiphertext);

#[derive(Clone, PartialEq, Eq)]
pub struct SharedSecret(pub [u8; SHARED_SECRET_BYTES]);

impl SharedSecret {
    pub fn as_bytes(&self) -> &[u8; SHARED_SECRET_BYTES] {
        &self.0
    }
}

impl AsRef<[u8]> for SharedSecret {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Debug for SharedSecret {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SharedSecret(..)")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KyberKeyPair {
    pub public: KyberPublicKey,
    pub secret: KyberSecretKey,
}

fn seed32(what: &'static str, s: &[u8]) -> Result<[u8; SYMBYTES]> {
    s.try_into().map_err(|_| Error::length(what, SYMBYTES, s.len()))
}

fn check_len(what: &'static str, expected: usize, got: &[u8]) -> Result<()> {
    if got.len() == expected {
        Ok(())
    } else {
        Err(Error::length(what, expected, got.len()))
    }
}

/// Kyber at one level on one backend. Cheap to copy; holds no key material.
#[derive(Debug, Clone, Copy)]
pub struct Kyber {
    params: KyberParams,
    engine: Engine,
}

impl Kyber {
    pub fn new(level: KyberLevel, backend: Backend) -> Result<Self> {
        Ok(Kyber {
            params: level.params(),
            engine: Engine::new(backend)?,
        })
    }

    pub fn params(&self) -> &KyberParams {
        &self.params
    }

    pub fn level(&self) -> KyberLevel {
        self.params.level
    }

    /// Key pair derived from the key-generation seed `seed_d` and the
    /// implicit-rejection seed `seed_z`.
    pub fn keygen(&self, seed_d: &[u8], seed_z: &[u8]) -> Result<KyberKeyPair> {
        let mut pk = vec![0u8; self.params.public_key_bytes()];
        let mut sk = vec![0u8; self.params.secret_key_bytes()];
        self.keygen_into(seed_d, seed_z, &mut pk, &mut sk)?;
        Ok(KyberKeyPair {
            public: KyberPublicKey(pk),
            secret: KyberSecretKey(sk),
        })
    }

    /// [`Kyber::keygen`] into caller-provided buffers of exact length.
    pub fn keygen_into(&self, seed_d: &[u8], seed_z: &[u8], pk: &mut [u8], sk: &mut [u8]) -> Result<()> {
        let p = &self.params;
        let d = seed32("seed_d", seed_d)?;
        let z = seed32("seed_z", seed_z)?;
        check_len("public key buffer", p.public_key_bytes(), pk)?;
        check_len("secret key buffer", p.secret_key_bytes(), sk)?;

        let cpa_len = p.indcpa_secret_key_bytes();
        indcpa::keypair(self.engine, p, &d, pk, &mut sk[..cpa_len]);
        // sk = cpa_sk || pk || H(pk) || z
        let pk_end = cpa_len + p.public_key_bytes();
        sk[cpa_len..pk_end].copy_from_slice(pk);
        sk[pk_end..pk_end + SYMBYTES].copy_from_slice(&sha3_256(pk));
        sk[pk_end + SYMBYTES..].copy_from_slice(&z);
        Ok(())
    }

    pub fn keygen_random(&self) -> Result<KyberKeyPair> {
        let mut seeds = [0u8; 2 * SYMBYTES];
        OsRng.fill_bytes(&mut seeds);
        self.keygen(&seeds[..SYMBYTES], &seeds[SYMBYTES..])
    }

    /// Encapsulates against `pk` using `seed_m` as the encapsulation coins.
    pub fn encapsulate(&self, pk: &[u8], seed_m: &[u8]) -> Result<(KyberCiphertext, SharedSecret)> {
        let mut ct = vec![0u8; self.params.ciphertext_bytes()];
        let mut ss = [0u8; SHARED_SECRET_BYTES];
        self.encapsulate_into(pk, seed_m, &mut ct, &mut ss)?;
        Ok((KyberCiphertext(ct), SharedSecret(ss)))
    }

    pub fn encapsulate_into(
        &self,
        pk: &[u8],
        seed_m: &[u8],
        ct: &mut [u8],
        ss: &mut [u8; SHARED_SECRET_BYTES],
    ) -> Result<()> {
        let p = &self.params;
        let coins = seed32("seed_m", seed_m)?;
        check_len("public key", p.public_key_bytes(), pk)?;
        check_len("ciphertext buffer", p.ciphertext_bytes(), ct)?;

        // buf = H(coins) || H(pk); (K', r) = G(buf)
        let mut buf = [0u8; 2 * SYMBYTES];
        buf[..SYMBYTES].copy_from_slice(&sha3_256(&coins));
        buf[SYMBYTES..].copy_from_slice(&sha3_256(pk));
        let mut kr = sha3_512(&buf);
        let msg: [u8; SYMBYTES] = buf[..SYMBYTES].try_into().unwrap();
        let r: [u8; SYMBYTES] = kr[SYMBYTES..].try_into().unwrap();
        indcpa::encrypt(self.engine, p, pk, &msg, &r, ct);
        kr[SYMBYTES..].copy_from_slice(&sha3_256(ct));
        shake256_into(&[&kr], ss);
        Ok(())
    }

    pub fn encapsulate_random(&self, pk: &[u8]) -> Result<(KyberCiphertext, SharedSecret)> {
        let mut m = [0u8; SYMBYTES];
        OsRng.fill_bytes(&mut m);
        self.encapsulate(pk, &m)
    }

    /// Recovers the shared secret. Any well-sized ciphertext is accepted; a
    /// ciphertext that fails re-encryption yields a pseudorandom secret keyed
    /// by the implicit-rejection seed, selected without branching.
    pub fn decapsulate(&self, sk: &[u8], ct: &[u8]) -> Result<SharedSecret> {
        let mut ss = [0u8; SHARED_SECRET_BYTES];
        let mut scratch = vec![0u8; self.params.ciphertext_bytes()];
        self.decapsulate_into(sk, ct, &mut scratch, &mut ss)?;
        Ok(SharedSecret(ss))
    }

    /// [`Kyber::decapsulate`] with a caller-provided re-encryption buffer of
    /// ciphertext length.
    pub fn decapsulate_into(
        &self,
        sk: &[u8],
        ct: &[u8],
        scratch: &mut [u8],
        ss: &mut [u8; SHARED_SECRET_BYTES],
    ) -> Result<()> {
        let p = &self.params;
        check_len("secret key", p.secret_key_bytes(), sk)?;
        check_len("ciphertext", p.ciphertext_bytes(), ct)?;
        check_len("scratch buffer", p.ciphertext_bytes(), scratch)?;

        let cpa_len = p.indcpa_secret_key_bytes();
        let pk = &sk[cpa_len..cpa_len + p.public_key_bytes()];
        let hpk = &sk[cpa_len + p.public_key_bytes()..cpa_len + p.public_key_bytes() + SYMBYTES];
        let z = &sk[sk.len() - SYMBYTES..];

        let msg = indcpa::decrypt(self.engine, p, &sk[..cpa_len], ct);
        let mut buf = [0u8; 2 * SYMBYTES];
        buf[..SYMBYTES].copy_from_slice(&msg);
        buf[SYMBYTES..].copy_from_slice(hpk);
        let mut kr = sha3_512(&buf);
        let r: [u8; SYMBYTES] = kr[SYMBYTES..].try_into().unwrap();
        indcpa::encrypt(self.engine, p, pk, &msg, &r, scratch);
        let fail = ct_ne(ct, scratch);
        kr[SYMBYTES..].copy_from_slice(&sha3_256(ct));
        ct_cmov(&mut kr[..SYMBYTES], z, fail);
        shake256_into(&[&kr], ss);
        Ok(())
    }
}
