//! OpenSSL-backed workloads. All operations go through EVP_PKEY contexts.

use std::cell::RefCell;
use std::collections::HashMap;

use openssl::ec::{EcGroup, EcKey};
use openssl::hash::{hash, MessageDigest};
use openssl::nid::Nid;
use openssl::pkey::{Id, PKey, Private};
use openssl::pkey_ctx::PkeyCtx;
use openssl::rsa::{Padding, Rsa};

use super::{ClassicalOp, ClassicalScheme, Curve, Workload};
use crate::{Error, Result};

/// RSA key generation takes long enough that keys are shared across
/// workloads prepared from one handle.
#[derive(Default)]
pub(crate) struct KeyCache(RefCell<HashMap<u32, PKey<Private>>>);

const MESSAGE: &[u8; 32] = b"classical baseline fixed message";

fn provider_err(e: openssl::error::ErrorStack) -> Error {
    Error::Provider(e.to_string())
}

pub(crate) fn version() -> String {
    openssl::version::version().to_owned()
}

fn nid(curve: Curve) -> Nid {
    match curve {
        Curve::P256 => Nid::X9_62_PRIME256V1,
        Curve::P384 => Nid::SECP384R1,
        Curve::P521 => Nid::SECP521R1,
    }
}

fn digest(curve: Option<Curve>) -> MessageDigest {
    match curve {
        Some(Curve::P384) => MessageDigest::sha384(),
        Some(Curve::P521) => MessageDigest::sha512(),
        _ => MessageDigest::sha256(),
    }
}

pub(crate) fn probe(scheme: ClassicalScheme) -> bool {
    match scheme.curve() {
        Some(curve) => EcGroup::from_curve_name(nid(curve)).is_ok(),
        None => PkeyCtx::new_id(Id::RSA).and_then(|mut c| c.keygen_init()).is_ok(),
    }
}

fn ec_keygen(curve: Curve) -> Result<PKey<Private>> {
    let group = EcGroup::from_curve_name(nid(curve)).map_err(provider_err)?;
    let key = EcKey::generate(&group).map_err(provider_err)?;
    PKey::from_ec_key(key).map_err(provider_err)
}

fn rsa_keygen(bits: u32) -> Result<PKey<Private>> {
    let rsa = Rsa::generate(bits).map_err(provider_err)?;
    PKey::from_rsa(rsa).map_err(provider_err)
}

fn keygen(scheme: ClassicalScheme) -> Result<PKey<Private>> {
    match (scheme.curve(), scheme.rsa_bits()) {
        (Some(curve), _) => ec_keygen(curve),
        (None, Some(bits)) => rsa_keygen(bits),
        (None, None) => unreachable!("every scheme is EC or RSA"),
    }
}

impl KeyCache {
    fn key(&self, scheme: ClassicalScheme) -> Result<PKey<Private>> {
        let Some(bits) = scheme.rsa_bits() else {
            return keygen(scheme);
        };
        if let Some(k) = self.0.borrow().get(&bits) {
            return Ok(k.clone());
        }
        let k = rsa_keygen(bits)?;
        self.0.borrow_mut().insert(bits, k.clone());
        Ok(k)
    }
}

fn agree(own: &PKey<Private>, peer: &PKey<Private>, out: &mut Vec<u8>) -> Result<usize> {
    let mut ctx = PkeyCtx::new(own).map_err(provider_err)?;
    ctx.derive_init().map_err(provider_err)?;
    ctx.derive_set_peer(peer).map_err(provider_err)?;
    out.clear();
    ctx.derive_to_vec(out).map_err(provider_err)
}

fn sign(scheme: ClassicalScheme, key: &PKey<Private>, digest_bytes: &[u8], out: &mut Vec<u8>) -> Result<usize> {
    let mut ctx = PkeyCtx::new(key).map_err(provider_err)?;
    ctx.sign_init().map_err(provider_err)?;
    if scheme.rsa_bits().is_some() {
        ctx.set_rsa_padding(Padding::PKCS1).map_err(provider_err)?;
        ctx.set_signature_md(openssl::md::Md::sha256()).map_err(provider_err)?;
    }
    out.clear();
    ctx.sign_to_vec(digest_bytes, out).map_err(provider_err)
}

fn verify(scheme: ClassicalScheme, key: &PKey<Private>, digest_bytes: &[u8], sig: &[u8]) -> Result<bool> {
    let mut ctx = PkeyCtx::new(key).map_err(provider_err)?;
    ctx.verify_init().map_err(provider_err)?;
    if scheme.rsa_bits().is_some() {
        ctx.set_rsa_padding(Padding::PKCS1).map_err(provider_err)?;
        ctx.set_signature_md(openssl::md::Md::sha256()).map_err(provider_err)?;
    }
    // OpenSSL reports a malformed signature as an error rather than `false`.
    Ok(ctx.verify(digest_bytes, sig).unwrap_or(false))
}

fn oaep_ctx(key: &PKey<Private>, encrypt: bool) -> Result<PkeyCtx<Private>> {
    let mut ctx = PkeyCtx::new(key).map_err(provider_err)?;
    if encrypt {
        ctx.encrypt_init().map_err(provider_err)?;
    } else {
        ctx.decrypt_init().map_err(provider_err)?;
    }
    ctx.set_rsa_padding(Padding::PKCS1_OAEP).map_err(provider_err)?;
    Ok(ctx)
}

fn encrypt(key: &PKey<Private>, msg: &[u8], out: &mut Vec<u8>) -> Result<usize> {
    out.clear();
    oaep_ctx(key, true)?.encrypt_to_vec(msg, out).map_err(provider_err)
}

fn decrypt(key: &PKey<Private>, ct: &[u8], out: &mut Vec<u8>) -> Result<usize> {
    out.clear();
    oaep_ctx(key, false)?.decrypt_to_vec(ct, out).map_err(provider_err)
}

fn message_digest(scheme: ClassicalScheme) -> Result<Vec<u8>> {
    Ok(hash(digest(scheme.curve()), MESSAGE).map_err(provider_err)?.to_vec())
}

pub(crate) fn workload(keys: &KeyCache, scheme: ClassicalScheme, op: ClassicalOp) -> Result<Workload> {
    let mut out = Vec::new();
    Ok(match op {
        ClassicalOp::Keygen => Workload::new(move || keygen(scheme).map(drop)),
        ClassicalOp::Agree => {
            let (own, peer) = (keys.key(scheme)?, keys.key(scheme)?);
            Workload::new(move || agree(&own, &peer, &mut out).map(drop))
        }
        ClassicalOp::Sign => {
            let key = keys.key(scheme)?;
            let d = message_digest(scheme)?;
            Workload::new(move || sign(scheme, &key, &d, &mut out).map(drop))
        }
        ClassicalOp::Verify => {
            let key = keys.key(scheme)?;
            let d = message_digest(scheme)?;
            let mut sig = Vec::new();
            sign(scheme, &key, &d, &mut sig)?;
            Workload::new(move || match verify(scheme, &key, &d, &sig)? {
                true => Ok(()),
                false => Err(Error::Provider("signature rejected".into())),
            })
        }
        ClassicalOp::Encrypt => {
            let key = keys.key(scheme)?;
            Workload::new(move || encrypt(&key, MESSAGE, &mut out).map(drop))
        }
        ClassicalOp::Decrypt => {
            let key = keys.key(scheme)?;
            let mut ct = Vec::new();
            encrypt(&key, MESSAGE, &mut ct)?;
            Workload::new(move || decrypt(&key, &ct, &mut out).map(drop))
        }
    })
}

pub(crate) fn roundtrip(keys: &KeyCache, scheme: ClassicalScheme) -> Result<()> {
    let fail = |what: &str| Err(Error::Provider(format!("{scheme}: {what}")));
    let key = keys.key(scheme)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    if scheme.supports(ClassicalOp::Agree) {
        let peer = keys.key(scheme)?;
        agree(&key, &peer, &mut a)?;
        agree(&peer, &key, &mut b)?;
        if a != b || a.is_empty() {
            return fail("agreement sides disagree");
        }
    }
    if scheme.supports(ClassicalOp::Sign) {
        let d = message_digest(scheme)?;
        sign(scheme, &key, &d, &mut a)?;
        if !verify(scheme, &key, &d, &a)? {
            return fail("fresh signature rejected");
        }
        let last = a.len() - 1;
        a[last] ^= 1;
        if verify(scheme, &key, &d, &a)? {
            return fail("tampered signature accepted");
        }
    }
    if scheme.supports(ClassicalOp::Encrypt) {
        encrypt(&key, MESSAGE, &mut a)?;
        decrypt(&key, &a, &mut b)?;
        if b != MESSAGE {
            return fail("decryption does not invert encryption");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn every_scheme_roundtrips_and_runs() {
        let handle = probe_provider();
        assert!(handle.version().is_some());
        for scheme in handle.available_schemes() {
            correctness_gate(&handle, scheme).unwrap();
            for op in [
                ClassicalOp::Keygen,
                ClassicalOp::Agree,
                ClassicalOp::Sign,
                ClassicalOp::Verify,
                ClassicalOp::Encrypt,
                ClassicalOp::Decrypt,
            ] {
                match run_classical_op(&handle, scheme, op) {
                    Ok(mut w) if !(scheme.rsa_bits().is_some() && op == ClassicalOp::Keygen) => {
                        w.invoke().unwrap();
                        w.invoke().unwrap();
                    }
                    Ok(_) => {}
                    Err(_) => assert!(!scheme.supports(op), "{scheme} {op}"),
                }
            }
        }
    }

    #[test]
    fn withdrawn_capability_is_isolated() {
        let handle = probe_provider().without(ClassicalScheme::EcdhP521);
        assert!(!handle.is_available(ClassicalScheme::EcdhP521));
        assert!(run_classical_op(&handle, ClassicalScheme::EcdhP521, ClassicalOp::Agree).is_err());
        assert!(run_classical_op(&handle, ClassicalScheme::EcdhP256, ClassicalOp::Agree).is_ok());
    }
}
