//! Deterministic file emission: CSV with shortest round-trip float
//! formatting and LF line endings, JSON summaries, and provenance blocks.
//! Files are written to a temporary sibling and renamed into place.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::ResolvedConfig;
use crate::Failure;

/// Formats a float with the shortest representation that parses back to the
/// identical value (Rust's `Display` for f64).
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// One CSV field: a number or empty.
#[derive(Debug, Clone, Copy)]
pub enum Field {
    Num(f64),
    Empty,
}

pub fn write_csv(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = Vec<Field>>,
) -> Result<(), Failure> {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for field in row {
            if !first {
                out.push(',');
            }
            first = false;
            match field {
                Field::Num(v) => out.push_str(&fmt_f64(v)),
                Field::Empty => {}
            }
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::invalid(format!("serialization error: {e}")))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| Failure::invalid(format!("cannot move output into {}: {e}", path.display())))
}

/// Resolved-configuration fingerprint embedded in every JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub hash: String,
    pub config: serde_json::Value,
}

pub fn provenance(config: &ResolvedConfig) -> Result<Provenance, Failure> {
    let value = serde_json::to_value(config)
        .map_err(|e| Failure::invalid(format!("serialization error: {e}")))?;
    let canonical = serde_json::to_string(&value)
        .map_err(|e| Failure::invalid(format!("serialization error: {e}")))?;
    Ok(Provenance {
        hash: format!("fnv1a64:{:016x}", fnv1a64(canonical.as_bytes())),
        config: value,
    })
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for v in [1.0, 0.1, 2.0 / 3.0, 1e-300, -0.25, 372.15e-3] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt_f64(1.0), "1");
    }

    #[test]
    fn fnv_hash_is_stable() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
    }
}
