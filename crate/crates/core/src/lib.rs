//! Round-3 CRYSTALS-Kyber and CRYSTALS-Dilithium, a cycle-accurate benchmark
//! harness, and an adapter that times classical OpenSSL schemes the same way.
//!
//! Every scheme operation has a seeded entry point; the `*_random` variants
//! draw seeds from the OS and delegate. Lattice arithmetic runs on one of two
//! [`Backend`]s that produce bit-identical output: a portable scalar path and
//! an AVX2 path selected at runtime.

pub mod arch;
pub mod bench;
pub mod classical;
pub mod cli;
pub mod ct;
pub mod dilithium;
mod domain;
mod error;
pub mod kat;
pub mod keccak;
pub mod kyber;
mod scheme;

pub use arch::{accelerated_available, Backend};
pub use domain::Domain;
pub use error::{Error, Result};
pub use scheme::{PqcOp, PqcScheme};
