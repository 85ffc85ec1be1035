//! Response-file parsing: `key = value` lines grouped into records that each
//! start with `count = N`, separated by blank lines; `#` lines are comments.

use super::{field_len, KatError};
use crate::PqcScheme;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatRecord {
    pub count: u32,
    /// 1-based line of the `count` entry.
    pub line: usize,
    fields: Vec<(String, Vec<u8>)>,
}

impl KatRecord {
    pub fn field(&self, name: &str) -> Option<&[u8]> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_slice())
    }

    pub fn fields(&self) -> impl Iterator<Item = (&str, &[u8])> {
        self.fields.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Decimal-valued keys; every other value is hex.
const DECIMAL_KEYS: [&str; 3] = ["count", "mlen", "smlen"];

pub fn parse(text: &str, scheme: PqcScheme) -> Result<Vec<KatRecord>, KatError> {
    let mut records: Vec<KatRecord> = Vec::new();
    let mut pending_len: Vec<(&str, usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| KatError::Parse { line: lineno, message };
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected `key = value`, found {line:?}")))?;
        if key.is_empty() {
            return Err(err("empty key".into()));
        }
        if DECIMAL_KEYS.contains(&key) {
            let n: u32 = value.parse().map_err(|_| err(format!("`{key}` is not a decimal integer")))?;
            match key {
                "count" => {
                    let expected = records.len() as u32;
                    if n != expected {
                        return Err(err(format!("count {n} out of sequence, expected {expected}")));
                    }
                    records.push(KatRecord {
                        count: n,
                        line: lineno,
                        fields: Vec::new(),
                    });
                }
                _ => pending_len.push((if key == "mlen" { "msg" } else { "sm" }, n as usize, lineno)),
            }
            continue;
        }
        let record = records
            .last_mut()
            .ok_or_else(|| err(format!("`{key}` appears before the first count")))?;
        if record.field(key).is_some() {
            return Err(err(format!("duplicate field `{key}` in record {}", record.count)));
        }
        let bytes = hex::decode(value).map_err(|e| err(format!("`{key}` is not valid hex: {e}")))?;
        if let Some(expected) = field_len(scheme, key) {
            if bytes.len() != expected {
                return Err(err(format!("`{key}` holds {} bytes, expected {expected}", bytes.len())));
            }
        }
        record.fields.push((key.to_owned(), bytes));
    }
    if records.is_empty() {
        return Err(KatError::Empty);
    }
    check_declared_lengths(&records, &pending_len)?;
    Ok(records)
}

fn check_declared_lengths(records: &[KatRecord], declared: &[(&str, usize, usize)]) -> Result<(), KatError> {
    for &(field, len, line) in declared {
        let record = records.iter().rev().find(|r| r.line < line);
        let actual = record.and_then(|r| r.field(field)).map(<[u8]>::len);
        if actual.is_some_and(|a| a != len) {
            return Err(KatError::Parse {
                line,
                message: format!("declared length {len} disagrees with `{field}` ({} bytes)", actual.unwrap_or(0)),
            });
        }
    }
    Ok(())
}
