//! Known-answer-test replay against submission-package response files.
//!
//! Each record is replayed from its 48-byte `seed` through [`KatDrbg`], drawing
//! randomness in the same calls as the reference harness. Records may instead
//! carry pre-expanded inputs (`d`, `z`, `m` for Kyber; `xi` for Dilithium),
//! which take precedence over `seed`.

mod drbg;
mod rsp;

use std::fmt;

use crate::dilithium::{Dilithium, SigningMode};
use crate::kyber::{Kyber, SYMBYTES};
use crate::{Backend, Error, PqcScheme};

pub use drbg::{KatDrbg, ENTROPY_BYTES};
pub use rsp::{parse, KatRecord};

/// Fixed byte length of a hex field, if the field has one.
pub(crate) fn field_len(scheme: PqcScheme, field: &str) -> Option<usize> {
    match (scheme, field) {
        (_, "seed") => Some(ENTROPY_BYTES),
        (PqcScheme::Kyber(l), _) => {
            let p = l.params();
            match field {
                "pk" => Some(p.public_key_bytes()),
                "sk" => Some(p.secret_key_bytes()),
                "ct" => Some(p.ciphertext_bytes()),
                "ss" | "d" | "z" | "m" => Some(SYMBYTES),
                _ => None,
            }
        }
        (PqcScheme::Dilithium(l), _) => {
            let p = l.params();
            match field {
                "pk" => Some(p.public_key_bytes()),
                "sk" => Some(p.secret_key_bytes()),
                "xi" => Some(crate::dilithium::SEEDBYTES),
                _ => None,
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum KatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("response file contains no records")]
    Empty,
    #[error("record {count}: {message}")]
    Record { count: u32, message: String },
    #[error(transparent)]
    Scheme(#[from] Error),
}

/// The first field of a record whose replayed value differs from the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatMismatch {
    pub count: u32,
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatSummary {
    pub scheme: PqcScheme,
    pub total: usize,
    pub passed: usize,
    /// One entry per failing record, in file order.
    pub mismatches: Vec<KatMismatch>,
}

impl KatSummary {
    pub fn all_passed(&self) -> bool {
        self.mismatches.is_empty() && self.passed == self.total
    }
}

impl fmt::Display for KatSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} records pass", self.scheme, self.passed, self.total)?;
        if let Some(m) = self.mismatches.first() {
            write!(f, "; first mismatch in record {} field {}", m.count, m.field)?;
        }
        Ok(())
    }
}

/// Parses `text` and replays every record.
pub fn run(text: &str, scheme: PqcScheme, backend: Backend) -> Result<KatSummary, KatError> {
    let records = parse(text, scheme)?;
    replay(&records, scheme, backend)
}

pub fn replay(records: &[KatRecord], scheme: PqcScheme, backend: Backend) -> Result<KatSummary, KatError> {
    let mut mismatches = Vec::new();
    for record in records {
        let outcome = match scheme {
            PqcScheme::Kyber(l) => replay_kyber(&Kyber::new(l, backend)?, record)?,
            PqcScheme::Dilithium(l) => replay_dilithium(&Dilithium::new(l, backend)?, record)?,
        };
        if let Some(field) = outcome {
            mismatches.push(KatMismatch {
                count: record.count,
                field,
            });
        }
    }
    Ok(KatSummary {
        scheme,
        total: records.len(),
        passed: records.len() - mismatches.len(),
        mismatches,
    })
}

/// Supplies the per-record random inputs in harness draw order.
enum Inputs<'r> {
    Drbg(KatDrbg),
    Expanded(&'r KatRecord),
}

impl<'r> Inputs<'r> {
    fn for_record(record: &'r KatRecord, expanded: &[&str]) -> Result<Self, KatError> {
        if expanded.iter().all(|f| record.field(f).is_some()) {
            return Ok(Inputs::Expanded(record));
        }
        let seed = record.field("seed").ok_or_else(|| KatError::Record {
            count: record.count,
            message: format!("needs `seed` or all of {}", expanded.join(", ")),
        })?;
        let seed: &[u8; ENTROPY_BYTES] = seed.try_into().map_err(|_| KatError::Record {
            count: record.count,
            message: "seed must be 48 bytes".into(),
        })?;
        Ok(Inputs::Drbg(KatDrbg::new(seed)))
    }

    fn draw(&mut self, field: &str) -> [u8; 32] {
        match self {
            Inputs::Drbg(d) => d.bytes(),
            Inputs::Expanded(r) => r.field(field).and_then(|v| v.try_into().ok()).unwrap_or([0; 32]),
        }
    }
}

/// Compares in file order; returns the first differing field.
fn first_difference(record: &KatRecord, produced: &[(&str, &[u8])]) -> Result<Option<String>, KatError> {
    for (field, value) in produced {
        match record.field(field) {
            Some(expected) if expected == *value => {}
            Some(_) => return Ok(Some((*field).to_owned())),
            None => {
                return Err(KatError::Record {
                    count: record.count,
                    message: format!("missing field `{field}`"),
                })
            }
        }
    }
    Ok(None)
}

fn replay_kyber(kem: &Kyber, record: &KatRecord) -> Result<Option<String>, KatError> {
    let mut inputs = Inputs::for_record(record, &["d", "z", "m"])?;
    let d = inputs.draw("d");
    let z = inputs.draw("z");
    let kp = kem.keygen(&d, &z)?;
    let m = inputs.draw("m");
    let (ct, ss) = kem.encapsulate(kp.public.as_bytes(), &m)?;
    let ss_dec = kem.decapsulate(kp.secret.as_bytes(), ct.as_bytes())?;
    if let Some(field) = first_difference(
        record,
        &[
            ("pk", kp.public.as_bytes()),
            ("sk", kp.secret.as_bytes()),
            ("ct", ct.as_bytes()),
            ("ss", ss.as_bytes()),
        ],
    )? {
        return Ok(Some(field));
    }
    Ok((ss_dec != ss).then(|| "ss (decapsulated)".to_owned()))
}

fn replay_dilithium(dsa: &Dilithium, record: &KatRecord) -> Result<Option<String>, KatError> {
    let mut inputs = Inputs::for_record(record, &["xi"])?;
    let xi = inputs.draw("xi");
    let kp = dsa.keygen(&xi)?;
    let msg = record.field("msg").ok_or_else(|| KatError::Record {
        count: record.count,
        message: "missing field `msg`".into(),
    })?;
    let sig = dsa.sign(kp.secret.as_bytes(), msg, SigningMode::Deterministic)?;
    let mut sm = sig.as_bytes().to_vec();
    sm.extend_from_slice(msg);
    if let Some(field) = first_difference(
        record,
        &[("pk", kp.public.as_bytes()), ("sk", kp.secret.as_bytes()), ("sm", &sm)],
    )? {
        return Ok(Some(field));
    }
    Ok((!dsa.verify(kp.public.as_bytes(), msg, sig.as_bytes())).then(|| "sm (verification)".to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kyber::KyberLevel;

    #[test]
    fn expanded_inputs_match_drbg_draws() {
        let seed = [3u8; 48];
        let mut drbg = KatDrbg::new(&seed);
        let (d, z, m): ([u8; 32], [u8; 32], [u8; 32]) = (drbg.bytes(), drbg.bytes(), drbg.bytes());
        let kem = Kyber::new(KyberLevel::Kyber512, Backend::Reference).unwrap();
        let kp = kem.keygen(&d, &z).unwrap();
        let (ct, ss) = kem.encapsulate(kp.public.as_bytes(), &m).unwrap();
        let body = format!(
            "pk = {}\nsk = {}\nct = {}\nss = {}\n",
            hex::encode(kp.public.as_bytes()),
            hex::encode(kp.secret.as_bytes()),
            hex::encode(ct.as_bytes()),
            hex::encode(ss.as_bytes())
        );
        let seeded = format!("count = 0\nseed = {}\n{body}", hex::encode(seed));
        let expanded = format!(
            "count = 0\nd = {}\nz = {}\nm = {}\n{body}",
            hex::encode(d),
            hex::encode(z),
            hex::encode(m)
        );
        let scheme = PqcScheme::Kyber(KyberLevel::Kyber512);
        assert!(run(&seeded, scheme, Backend::Reference).unwrap().all_passed());
        assert!(run(&expanded, scheme, Backend::Reference).unwrap().all_passed());
    }
}
