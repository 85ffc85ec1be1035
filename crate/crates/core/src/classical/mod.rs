//! Classical baselines (ECDH, ECDSA, RSA) timed through the host OpenSSL.
//!
//! [`probe_provider`] reports which schemes the linked library supports;
//! [`run_classical_op`] prepares inputs and returns a [`Workload`] whose
//! every invocation performs exactly one operation. Without the `openssl`
//! feature every scheme is reported unavailable.

#[cfg(feature = "openssl")]
mod provider;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use crate::bench::Workload;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassicalKind {
    KeyAgreement,
    Signature,
    /// RSA, usable for both encryption and signatures.
    KeyTransport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassicalScheme {
    EcdhP256,
    EcdhP384,
    EcdhP521,
    EcdsaP256,
    EcdsaP384,
    EcdsaP521,
    Rsa2048,
    Rsa3072,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassicalOp {
    Keygen,
    Agree,
    Sign,
    Verify,
    Encrypt,
    Decrypt,
}

impl ClassicalOp {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassicalOp::Keygen => "keygen",
            ClassicalOp::Agree => "agree",
            ClassicalOp::Sign => "sign",
            ClassicalOp::Verify => "verify",
            ClassicalOp::Encrypt => "encrypt",
            ClassicalOp::Decrypt => "decrypt",
        }
    }
}

impl fmt::Display for ClassicalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg_attr(not(feature = "openssl"), allow(dead_code))]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Curve {
    P256,
    P384,
    P521,
}

impl ClassicalScheme {
    pub const ALL: [ClassicalScheme; 8] = [
        ClassicalScheme::EcdhP256,
        ClassicalScheme::EcdhP384,
        ClassicalScheme::EcdhP521,
        ClassicalScheme::EcdsaP256,
        ClassicalScheme::EcdsaP384,
        ClassicalScheme::EcdsaP521,
        ClassicalScheme::Rsa2048,
        ClassicalScheme::Rsa3072,
    ];

    pub fn kind(self) -> ClassicalKind {
        use ClassicalScheme::*;
        match self {
            EcdhP256 | EcdhP384 | EcdhP521 => ClassicalKind::KeyAgreement,
            EcdsaP256 | EcdsaP384 | EcdsaP521 => ClassicalKind::Signature,
            Rsa2048 | Rsa3072 => ClassicalKind::KeyTransport,
        }
    }

    /// Machine-readable identifier.
    pub fn name(self) -> &'static str {
        use ClassicalScheme::*;
        match self {
            EcdhP256 => "ecdh-p256",
            EcdhP384 => "ecdh-p384",
            EcdhP521 => "ecdh-p521",
            EcdsaP256 => "ecdsa-p256",
            EcdsaP384 => "ecdsa-p384",
            EcdsaP521 => "ecdsa-p521",
            Rsa2048 => "rsa-2048",
            Rsa3072 => "rsa-3072",
        }
    }

    /// Row label in comparison tables. The top ECDSA row keeps its customary
    /// "P-512" label; it is measured on P-521 (see [`Self::label_footnote`]).
    pub fn label(self) -> &'static str {
        use ClassicalScheme::*;
        match self {
            EcdhP256 => "ECDH(P-256)",
            EcdhP384 => "ECDH(P-384)",
            EcdhP521 => "ECDH(P-521)",
            EcdsaP256 => "ECDSA(P-256)",
            EcdsaP384 => "ECDSA(P-384)",
            EcdsaP521 => "ECDSA(P-512)",
            Rsa2048 => "RSA-2048",
            Rsa3072 => "RSA-3072",
        }
    }

    pub fn label_footnote(self) -> Option<&'static str> {
        (self == ClassicalScheme::EcdsaP521).then_some("no standard P-512 curve exists; measured on P-521")
    }

    pub fn security_bits(self) -> u32 {
        use ClassicalScheme::*;
        match self {
            Rsa2048 => 112,
            Rsa3072 | EcdhP256 | EcdsaP256 => 128,
            EcdhP384 | EcdsaP384 => 192,
            EcdhP521 | EcdsaP521 => 256,
        }
    }

    #[cfg_attr(not(feature = "openssl"), allow(dead_code))]
    pub(crate) fn curve(self) -> Option<Curve> {
        use ClassicalScheme::*;
        match self {
            EcdhP256 | EcdsaP256 => Some(Curve::P256),
            EcdhP384 | EcdsaP384 => Some(Curve::P384),
            EcdhP521 | EcdsaP521 => Some(Curve::P521),
            Rsa2048 | Rsa3072 => None,
        }
    }

    #[cfg_attr(not(feature = "openssl"), allow(dead_code))]
    pub(crate) fn rsa_bits(self) -> Option<u32> {
        match self {
            ClassicalScheme::Rsa2048 => Some(2048),
            ClassicalScheme::Rsa3072 => Some(3072),
            _ => None,
        }
    }

    pub fn supports(self, op: ClassicalOp) -> bool {
        use ClassicalOp::*;
        match self.kind() {
            ClassicalKind::KeyAgreement => matches!(op, Keygen | Agree),
            ClassicalKind::Signature => matches!(op, Keygen | Sign | Verify),
            ClassicalKind::KeyTransport => op != Agree,
        }
    }

    fn index(self) -> usize {
        Self::ALL.iter().position(|&s| s == self).unwrap_or(0)
    }
}

impl fmt::Display for ClassicalScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClassicalScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace(['(', ')', '_'], "-");
        let norm = norm.trim_end_matches('-');
        Self::ALL
            .into_iter()
            .find(|c| c.name() == norm || c.label().to_ascii_lowercase().replace(['(', ')'], "-").trim_end_matches('-') == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown classical scheme {s:?}")))
    }
}

/// Which operations make up the "total" time of an RSA row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum RsaPolicy {
    /// OAEP encryption plus decryption.
    #[default]
    EncryptDecrypt,
    /// PKCS#1 v1.5 signing plus verification.
    SignVerify,
    /// Encryption, decryption, signing and verification.
    All,
}

impl RsaPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            RsaPolicy::EncryptDecrypt => "encrypt-decrypt",
            RsaPolicy::SignVerify => "sign-verify",
            RsaPolicy::All => "all",
        }
    }
}

impl FromStr for RsaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [RsaPolicy::EncryptDecrypt, RsaPolicy::SignVerify, RsaPolicy::All]
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown RSA policy {s:?}")))
    }
}

/// Operations summed into a scheme's total time, with multiplicities.
/// A key agreement counts both parties.
pub fn total_composition(scheme: ClassicalScheme, policy: RsaPolicy) -> Vec<(ClassicalOp, u32)> {
    use ClassicalOp::*;
    match scheme.kind() {
        ClassicalKind::KeyAgreement => vec![(Keygen, 2), (Agree, 2)],
        ClassicalKind::Signature => vec![(Keygen, 1), (Sign, 1), (Verify, 1)],
        ClassicalKind::KeyTransport => match policy {
            RsaPolicy::EncryptDecrypt => vec![(Encrypt, 1), (Decrypt, 1)],
            RsaPolicy::SignVerify => vec![(Sign, 1), (Verify, 1)],
            RsaPolicy::All => vec![(Encrypt, 1), (Decrypt, 1), (Sign, 1), (Verify, 1)],
        },
    }
}

/// Capabilities of the host provider.
pub struct ProviderHandle {
    available: [bool; 8],
    version: Option<String>,
    #[cfg(feature = "openssl")]
    keys: provider::KeyCache,
}

impl ProviderHandle {
    /// A handle with no capabilities.
    pub fn unavailable() -> Self {
        ProviderHandle {
            available: [false; 8],
            version: None,
            #[cfg(feature = "openssl")]
            keys: Default::default(),
        }
    }

    pub fn is_available(&self, scheme: ClassicalScheme) -> bool {
        self.available[scheme.index()]
    }

    pub fn available_schemes(&self) -> Vec<ClassicalScheme> {
        ClassicalScheme::ALL.into_iter().filter(|&s| self.is_available(s)).collect()
    }

    /// Provider identification, e.g. the OpenSSL version string.
    pub fn version(&self) -> Option<&str> {
        self.version.as_deref()
    }

    /// Withdraws a capability, as if the provider lacked it.
    pub fn without(mut self, scheme: ClassicalScheme) -> Self {
        self.available[scheme.index()] = false;
        self
    }
}

impl fmt::Debug for ProviderHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProviderHandle")
            .field("version", &self.version)
            .field("available", &self.available_schemes())
            .finish()
    }
}

/// Enumerates supported schemes. Never fails; missing support is reported
/// through capability flags.
pub fn probe_provider() -> ProviderHandle {
    #[cfg(feature = "openssl")]
    {
        let mut handle = ProviderHandle::unavailable();
        for scheme in ClassicalScheme::ALL {
            handle.available[scheme.index()] = provider::probe(scheme);
        }
        handle.version = Some(provider::version());
        handle
    }
    #[cfg(not(feature = "openssl"))]
    ProviderHandle::unavailable()
}

fn check(handle: &ProviderHandle, scheme: ClassicalScheme, op: ClassicalOp) -> Result<()> {
    if !handle.is_available(scheme) {
        return Err(Error::Unsupported {
            scheme: scheme.label().into(),
            op: "any operation (provider lacks the scheme)".into(),
        });
    }
    if !scheme.supports(op) {
        return Err(Error::Unsupported {
            scheme: scheme.label().into(),
            op: op.as_str().into(),
        });
    }
    Ok(())
}

/// Prepares a timed unit of work. Key generation, padding setup and
/// ciphertext or signature production for the inverse operation all happen
/// here, outside the returned closure.
pub fn run_classical_op(handle: &ProviderHandle, scheme: ClassicalScheme, op: ClassicalOp) -> Result<Workload> {
    check(handle, scheme, op)?;
    #[cfg(feature = "openssl")]
    return provider::workload(&handle.keys, scheme, op);
    #[cfg(not(feature = "openssl"))]
    Err(Error::BackendUnavailable)
}

/// One full roundtrip: agreement on both sides yields equal secrets, a fresh
/// signature verifies, decryption inverts encryption.
pub fn correctness_gate(handle: &ProviderHandle, scheme: ClassicalScheme) -> Result<()> {
    check(handle, scheme, ClassicalOp::Keygen)?;
    #[cfg(feature = "openssl")]
    return provider::roundtrip(&handle.keys, scheme);
    #[cfg(not(feature = "openssl"))]
    Err(Error::BackendUnavailable)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn security_levels() {
        let bits: Vec<u32> = ClassicalScheme::ALL.iter().map(|s| s.security_bits()).collect();
        assert_eq!(bits, [128, 192, 256, 128, 192, 256, 112, 128]);
    }

    #[test]
    fn names_parse() {
        for s in ClassicalScheme::ALL {
            assert_eq!(s.name().parse::<ClassicalScheme>().unwrap(), s);
            assert_eq!(s.label().parse::<ClassicalScheme>().unwrap(), s);
        }
        assert!("ecdh-p512".parse::<ClassicalScheme>().is_err());
    }

    #[test]
    fn compositions_use_supported_ops() {
        for s in ClassicalScheme::ALL {
            for policy in [RsaPolicy::EncryptDecrypt, RsaPolicy::SignVerify, RsaPolicy::All] {
                assert!(total_composition(s, policy).iter().all(|(op, _)| s.supports(*op)));
            }
        }
    }

    #[test]
    fn unavailable_handle_refuses_work() {
        let h = ProviderHandle::unavailable();
        assert!(h.available_schemes().is_empty());
        assert!(run_classical_op(&h, ClassicalScheme::Rsa2048, ClassicalOp::Encrypt).is_err());
    }
}
