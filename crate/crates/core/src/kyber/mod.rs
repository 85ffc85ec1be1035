//! Round-3 CRYSTALS-Kyber (v3.02): an IND-CCA2 key-encapsulation mechanism
//! over module lattices with q = 3329.
//!
//! [`Kyber`] binds a level to a backend. All operations are deterministic in
//! their explicit seed arguments.

#[cfg(target_arch = "x86_64")]
mod avx2;
mod indcpa;
mod kem;
mod params;
mod poly;
mod reduce;
mod ring;

pub use kem::{Kyber, KyberCiphertext, KyberKeyPair, KyberPublicKey, KyberSecretKey, SharedSecret};
pub use params::{KyberLevel, KyberParams, N, Q, SHARED_SECRET_BYTES, SYMBYTES};
pub use ring::{RingElement, COMPRESSION_DEPTHS};
