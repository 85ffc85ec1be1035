//! Round-3 CRYSTALS-Dilithium (v3.1) signatures over module lattices with
//! q = 8380417.
//!
//! [`Dilithium`] binds a level to a backend. Signing is deterministic unless
//! [`SigningMode::Randomized`] supplies extra randomness.

#[cfg(target_arch = "x86_64")]
mod avx2;
mod params;
mod poly;
mod reduce;
mod ring;
mod rounding;
mod sign;

pub use params::{DilithiumLevel, DilithiumParams, CRHBYTES, D, N, Q, SEEDBYTES};
pub use ring::RingElement;
pub use rounding::{decompose, make_hint, power2round, use_hint};
pub use sign::{
    sample_in_ball, Dilithium, DilithiumKeyPair, DilithiumPublicKey, DilithiumSecretKey, DilithiumSignature,
    SigningMode, MAX_SIGNING_ATTEMPTS,
};
