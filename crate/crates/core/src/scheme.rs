//! The six post-quantum parameter sets as one enumerable type.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::dilithium::DilithiumLevel;
use crate::kyber::KyberLevel;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PqcScheme {
    Kyber(KyberLevel),
    Dilithium(DilithiumLevel),
}

/// Operations timed per scheme. Kyber uses gen/enc/dec, Dilithium gen/sign/verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PqcOp {
    Keygen,
    Encapsulate,
    Decapsulate,
    Sign,
    Verify,
}

impl PqcOp {
    /// Short row label: gen, enc, dec, sign, verify.
    pub fn as_str(self) -> &'static str {
        match self {
            PqcOp::Keygen => "gen",
            PqcOp::Encapsulate => "enc",
            PqcOp::Decapsulate => "dec",
            PqcOp::Sign => "sign",
            PqcOp::Verify => "verify",
        }
    }
}

impl fmt::Display for PqcOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl PqcScheme {
    pub const ALL: [PqcScheme; 6] = [
        PqcScheme::Kyber(KyberLevel::Kyber512),
        PqcScheme::Kyber(KyberLevel::Kyber768),
        PqcScheme::Kyber(KyberLevel::Kyber1024),
        PqcScheme::Dilithium(DilithiumLevel::Dilithium2),
        PqcScheme::Dilithium(DilithiumLevel::Dilithium3),
        PqcScheme::Dilithium(DilithiumLevel::Dilithium5),
    ];

    /// Identifier such as `kyber768` or `dilithium3`.
    pub fn name(self) -> &'static str {
        match self {
            PqcScheme::Kyber(l) => l.name(),
            PqcScheme::Dilithium(l) => l.name(),
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            PqcScheme::Kyber(_) => "kyber",
            PqcScheme::Dilithium(_) => "dilithium",
        }
    }

    /// The parameter-set number: 512/768/1024 or 2/3/5.
    pub fn level_number(self) -> u32 {
        match self {
            PqcScheme::Kyber(l) => l.number(),
            PqcScheme::Dilithium(l) => l.number(),
        }
    }

    /// Display label such as `Kyber-512`.
    pub fn label(self) -> String {
        match self {
            PqcScheme::Kyber(l) => format!("Kyber-{}", l.number()),
            PqcScheme::Dilithium(l) => format!("Dilithium-{}", l.number()),
        }
    }

    pub fn security_bits(self) -> u32 {
        match self {
            PqcScheme::Kyber(l) => l.security_bits(),
            PqcScheme::Dilithium(l) => l.security_bits(),
        }
    }

    pub fn ops(self) -> [PqcOp; 3] {
        match self {
            PqcScheme::Kyber(_) => [PqcOp::Keygen, PqcOp::Encapsulate, PqcOp::Decapsulate],
            PqcScheme::Dilithium(_) => [PqcOp::Keygen, PqcOp::Sign, PqcOp::Verify],
        }
    }

    /// Object sizes in bytes as (label, length): sk/pk/ct for Kyber, pk/sig
    /// for Dilithium.
    pub fn sizes(self) -> Vec<(&'static str, usize)> {
        match self {
            PqcScheme::Kyber(l) => {
                let p = l.params();
                vec![
                    ("sk", p.secret_key_bytes()),
                    ("pk", p.public_key_bytes()),
                    ("ct", p.ciphertext_bytes()),
                ]
            }
            PqcScheme::Dilithium(l) => {
                let p = l.params();
                vec![("pk", p.public_key_bytes()), ("sig", p.signature_bytes())]
            }
        }
    }
}

impl fmt::Display for PqcScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for PqcScheme {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for PqcScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.to_ascii_lowercase().replace(['-', '_'], "");
        Self::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme {s:?}")))
    }
}
