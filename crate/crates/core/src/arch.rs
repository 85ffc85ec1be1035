//! Backend selection and CPU feature detection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which implementation of the lattice arithmetic to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Reference,
    Accelerated,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Reference, Backend::Accelerated];

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Reference => "reference",
            Backend::Accelerated => "accelerated",
        }
    }

    pub fn is_available(self) -> bool {
        match self {
            Backend::Reference => true,
            Backend::Accelerated => accelerated_available(),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "reference" | "ref" => Ok(Backend::Reference),
            "accelerated" | "avx2" => Ok(Backend::Accelerated),
            other => Err(Error::InvalidParameter(format!("unknown backend `{other}`"))),
        }
    }
}

/// True when the running CPU supports the vector backend.
pub fn accelerated_available() -> bool {
    Avx2::detect().is_some()
}

/// Proof that AVX2 was detected at runtime. Only [`Avx2::detect`] creates one,
/// so holding a token makes calls into `#[target_feature(enable = "avx2")]`
/// code sound.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Avx2(());

impl Avx2 {
    #[cfg(target_arch = "x86_64")]
    pub(crate) fn detect() -> Option<Self> {
        if std::arch::is_x86_feature_detected!("avx2") {
            Some(Avx2(()))
        } else {
            None
        }
    }

    #[cfg(not(target_arch = "x86_64"))]
    pub(crate) fn detect() -> Option<Self> {
        None
    }

    pub(crate) fn require() -> Result<Self> {
        Self::detect().ok_or(Error::BackendUnavailable)
    }
}

/// Resolved backend: the reference path, or the vector path with proof that
/// the CPU supports it.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Engine {
    Reference,
    Avx2(Avx2),
}

impl Engine {
    pub(crate) fn new(backend: Backend) -> Result<Self> {
        match backend {
            Backend::Reference => Ok(Engine::Reference),
            Backend::Accelerated => Avx2::require().map(Engine::Avx2),
        }
    }
}
