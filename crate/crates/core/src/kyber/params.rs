use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const N: usize = 256;
pub const Q: i16 = 3329;
pub const SYMBYTES: usize = 32;
pub const SHARED_SECRET_BYTES: usize = 32;
pub const POLY_BYTES: usize = 384;

/// One of the three round-3 Kyber parameter sets, named by security level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KyberLevel {
    Kyber512,
    Kyber768,
    Kyber1024,
}

impl KyberLevel {
    pub const ALL: [KyberLevel; 3] = [KyberLevel::Kyber512, KyberLevel::Kyber768, KyberLevel::Kyber1024];

    pub const fn params(self) -> KyberParams {
        match self {
            KyberLevel::Kyber512 => KyberParams::new(self, 2, 3, 10, 4),
            KyberLevel::Kyber768 => KyberParams::new(self, 3, 2, 10, 4),
            KyberLevel::Kyber1024 => KyberParams::new(self, 4, 2, 11, 5),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KyberLevel::Kyber512 => "kyber512",
            KyberLevel::Kyber768 => "kyber768",
            KyberLevel::Kyber1024 => "kyber1024",
        }
    }

    /// The numeric suffix: 512, 768 or 1024.
    pub fn number(self) -> u32 {
        match self {
            KyberLevel::Kyber512 => 512,
            KyberLevel::Kyber768 => 768,
            KyberLevel::Kyber1024 => 1024,
        }
    }

    pub fn security_bits(self) -> u32 {
        match self {
            KyberLevel::Kyber512 => 128,
            KyberLevel::Kyber768 => 192,
            KyberLevel::Kyber1024 => 256,
        }
    }
}

impl fmt::Display for KyberLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KyberLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        let digits = s.strip_prefix("kyber").unwrap_or(&s).trim_start_matches('-');
        match digits {
            "512" => Ok(KyberLevel::Kyber512),
            "768" => Ok(KyberLevel::Kyber768),
            "1024" => Ok(KyberLevel::Kyber1024),
            _ => Err(Error::InvalidParameter(format!("unknown Kyber level `{s}`"))),
        }
    }
}

/// Scheme constants and byte sizes for one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KyberParams {
    pub level: KyberLevel,
    /// Module rank.
    pub k: usize,
    /// Noise width for secrets and encryption randomness.
    pub eta1: usize,
    /// Noise width for encryption errors.
    pub eta2: usize,
    /// Bits per coefficient of the compressed vector part of a ciphertext.
    pub du: u32,
    /// Bits per coefficient of the compressed scalar part of a ciphertext.
    pub dv: u32,
}

impl KyberParams {
    const fn new(level: KyberLevel, k: usize, eta1: usize, du: u32, dv: u32) -> Self {
        KyberParams {
            level,
            k,
            eta1,
            eta2: 2,
            du,
            dv,
        }
    }

    pub const fn q(&self) -> u16 {
        Q as u16
    }

    pub const fn n(&self) -> usize {
        N
    }

    pub const fn polyvec_bytes(&self) -> usize {
        self.k * POLY_BYTES
    }

    pub const fn polyvec_compressed_bytes(&self) -> usize {
        self.k * N * self.du as usize / 8
    }

    pub const fn poly_compressed_bytes(&self) -> usize {
        N * self.dv as usize / 8
    }

    pub const fn indcpa_secret_key_bytes(&self) -> usize {
        self.polyvec_bytes()
    }

    pub const fn public_key_bytes(&self) -> usize {
        self.polyvec_bytes() + SYMBYTES
    }

    /// Secret key: IND-CPA secret, public key, H(pk), implicit-rejection seed.
    pub const fn secret_key_bytes(&self) -> usize {
        self.indcpa_secret_key_bytes() + self.public_key_bytes() + 2 * SYMBYTES
    }

    pub const fn ciphertext_bytes(&self) -> usize {
        self.polyvec_compressed_bytes() + self.poly_compressed_bytes()
    }

    pub const fn shared_secret_bytes(&self) -> usize {
        SHARED_SECRET_BYTES
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_levels() {
        assert_eq!("kyber768".parse::<KyberLevel>().unwrap(), KyberLevel::Kyber768);
        assert_eq!("1024".parse::<KyberLevel>().unwrap(), KyberLevel::Kyber1024);
        assert_eq!("Kyber-512".parse::<KyberLevel>().unwrap(), KyberLevel::Kyber512);
        assert!("kyber256".parse::<KyberLevel>().is_err());
    }

    #[test]
    fn compressed_sizes() {
        let p = KyberLevel::Kyber1024.params();
        assert_eq!(p.polyvec_compressed_bytes(), 1408);
        assert_eq!(p.poly_compressed_bytes(), 160);
    }
}
