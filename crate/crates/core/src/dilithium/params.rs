use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const N: usize = 256;
pub const Q: i32 = 8380417;
/// Bits dropped from t by power-of-two rounding.
pub const D: u32 = 13;
pub const SEEDBYTES: usize = 32;
pub const CRHBYTES: usize = 64;

/// One of the three round-3 Dilithium parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DilithiumLevel {
    Dilithium2,
    Dilithium3,
    Dilithium5,
}

impl DilithiumLevel {
    pub const ALL: [DilithiumLevel; 3] = [
        DilithiumLevel::Dilithium2,
        DilithiumLevel::Dilithium3,
        DilithiumLevel::Dilithium5,
    ];

    pub const fn params(self) -> DilithiumParams {
        match self {
            DilithiumLevel::Dilithium2 => DilithiumParams {
                level: self,
                k: 4,
                l: 4,
                eta: 2,
                tau: 39,
                gamma1: 1 << 17,
                gamma2: (Q - 1) / 88,
                omega: 80,
            },
            DilithiumLevel::Dilithium3 => DilithiumParams {
                level: self,
                k: 6,
                l: 5,
                eta: 4,
                tau: 49,
                gamma1: 1 << 19,
                gamma2: (Q - 1) / 32,
                omega: 55,
            },
            DilithiumLevel::Dilithium5 => DilithiumParams {
                level: self,
                k: 8,
                l: 7,
                eta: 2,
                tau: 60,
                gamma1: 1 << 19,
                gamma2: (Q - 1) / 32,
                omega: 75,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DilithiumLevel::Dilithium2 => "dilithium2",
            DilithiumLevel::Dilithium3 => "dilithium3",
            DilithiumLevel::Dilithium5 => "dilithium5",
        }
    }

    /// The numeric suffix: 2, 3 or 5.
    pub fn number(self) -> u32 {
        match self {
            DilithiumLevel::Dilithium2 => 2,
            DilithiumLevel::Dilithium3 => 3,
            DilithiumLevel::Dilithium5 => 5,
        }
    }

    pub fn security_bits(self) -> u32 {
        match self {
            DilithiumLevel::Dilithium2 => 128,
            DilithiumLevel::Dilithium3 => 192,
            DilithiumLevel::Dilithium5 => 256,
        }
    }
}

impl fmt::Display for DilithiumLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DilithiumLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        let digits = s.strip_prefix("dilithium").unwrap_or(&s).trim_start_matches('-');
        match digits {
            "2" => Ok(DilithiumLevel::Dilithium2),
            "3" => Ok(DilithiumLevel::Dilithium3),
            "5" => Ok(DilithiumLevel::Dilithium5),
            _ => Err(Error::InvalidParameter(format!("unknown Dilithium level `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DilithiumParams {
    pub level: DilithiumLevel,
    /// Rows of the public matrix.
    pub k: usize,
    /// Columns of the public matrix.
    pub l: usize,
    /// Secret coefficient bound.
    pub eta: i32,
    /// Number of nonzero challenge coefficients.
    pub tau: usize,
    /// Mask coefficient range.
    pub gamma1: i32,
    /// Low-order rounding range.
    pub gamma2: i32,
    /// Maximum number of hint bits.
    pub omega: usize,
}

impl DilithiumParams {
    pub const fn q(&self) -> i32 {
        Q
    }

    pub const fn n(&self) -> usize {
        N
    }

    /// tau * eta, the bound on the challenge-times-secret coefficients.
    pub const fn beta(&self) -> i32 {
        self.tau as i32 * self.eta
    }

    pub(crate) const fn eta_bits(&self) -> u32 {
        if self.eta == 2 {
            3
        } else {
            4
        }
    }

    pub(crate) const fn z_bits(&self) -> u32 {
        if self.gamma1 == 1 << 17 {
            18
        } else {
            20
        }
    }

    pub(crate) const fn w1_bits(&self) -> u32 {
        if self.gamma2 == (Q - 1) / 88 {
            6
        } else {
            4
        }
    }

    pub(crate) const fn poly_eta_bytes(&self) -> usize {
        N * self.eta_bits() as usize / 8
    }

    pub(crate) const fn poly_z_bytes(&self) -> usize {
        N * self.z_bits() as usize / 8
    }

    pub(crate) const fn poly_w1_bytes(&self) -> usize {
        N * self.w1_bits() as usize / 8
    }

    pub(crate) const POLY_T1_BYTES: usize = 320;
    pub(crate) const POLY_T0_BYTES: usize = 416;

    pub const fn public_key_bytes(&self) -> usize {
        SEEDBYTES + self.k * Self::POLY_T1_BYTES
    }

    /// Secret key: rho, key, tr, s1, s2, t0.
    pub const fn secret_key_bytes(&self) -> usize {
        3 * SEEDBYTES + (self.l + self.k) * self.poly_eta_bytes() + self.k * Self::POLY_T0_BYTES
    }

    /// Signature: challenge seed, z, hint indices and per-row counts.
    pub const fn signature_bytes(&self) -> usize {
        SEEDBYTES + self.l * self.poly_z_bytes() + self.omega + self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        let b: Vec<i32> = DilithiumLevel::ALL.iter().map(|l| l.params().beta()).collect();
        assert_eq!(b, [78, 196, 120]);
    }

    #[test]
    fn parse_levels() {
        assert_eq!("dilithium5".parse::<DilithiumLevel>().unwrap(), DilithiumLevel::Dilithium5);
        assert_eq!("3".parse::<DilithiumLevel>().unwrap(), DilithiumLevel::Dilithium3);
        assert!("dilithium4".parse::<DilithiumLevel>().is_err());
    }
}
