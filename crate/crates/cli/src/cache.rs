//! Persistent memo cache: append-only JSON lines, one record per line,
//! e.g. `{"key":"p2|3|1||3","value":"12"}`.
//!
//! Keys are the canonical cache-key strings of the recursion engines.
//! Corrupted lines are skipped with a warning and never trusted;
//! well-formed duplicate keys must agree on the value, and a mismatch is
//! an integrity violation (exit 3). Appends are serialized through an
//! advisory exclusive file lock so concurrent processes interleave whole
//! records only.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, Sign};
use serde::{Deserialize, Serialize};

use severi_core::severi_plane::{PlaneEngine, PlaneKey, TangencyProfile};
use severi_core::severi_quadric::{QuadricEngine, QuadricKey};

#[derive(Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub value: String,
}

pub struct CacheStore {
    path: PathBuf,
    /// Keys already present in the file (canonical key -> decimal value).
    loaded: HashMap<String, String>,
    pub loaded_count: usize,
    pub appended_count: usize,
}

/// A cache key parsed back into an engine key.
enum ParsedKey {
    Plane(PlaneKey),
    Quadric(QuadricKey),
}

fn parse_key(key: &str) -> Option<ParsedKey> {
    let parts: Vec<&str> = key.split('|').collect();
    match parts.as_slice() {
        ["p2", d, delta, alpha, beta] => {
            let key = PlaneKey::new(
                d.parse().ok()?,
                delta.parse().ok()?,
                TangencyProfile::parse(alpha).ok()?,
                TangencyProfile::parse(beta).ok()?,
            )
            .ok()?;
            Some(ParsedKey::Plane(key))
        }
        ["f0", m, n, delta, alpha, beta] => {
            let key = QuadricKey::new(
                m.parse().ok()?,
                n.parse().ok()?,
                delta.parse().ok()?,
                TangencyProfile::parse(alpha).ok()?,
                TangencyProfile::parse(beta).ok()?,
            )
            .ok()?;
            Some(ParsedKey::Quadric(key))
        }
        _ => None,
    }
}

fn parse_value(value: &str) -> Option<BigInt> {
    let v: BigInt = value.parse().ok()?;
    if v.sign() == Sign::Minus {
        return None;
    }
    Some(v)
}

impl CacheStore {
    pub fn file_path(dir: &Path) -> PathBuf {
        dir.join("severi_cache.jsonl")
    }

    /// Load the cache file (if any) under `dir` and prime the engines.
    ///
    /// Returns an error string only for the duplicate-key value mismatch,
    /// which callers must treat as an integrity violation.
    pub fn load(
        dir: &Path,
        plane: &PlaneEngine,
        quadric: &QuadricEngine,
    ) -> Result<CacheStore, String> {
        let path = Self::file_path(dir);
        let mut store = CacheStore {
            path,
            loaded: HashMap::new(),
            loaded_count: 0,
            appended_count: 0,
        };
        let Ok(text) = std::fs::read_to_string(&store.path) else {
            return Ok(store);
        };
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let Ok(record) = serde_json::from_str::<CacheRecord>(line) else {
                eprintln!(
                    "warning: cache {}:{}: malformed line skipped",
                    store.path.display(),
                    lineno + 1
                );
                continue;
            };
            let (Some(parsed), Some(value)) = (parse_key(&record.key), parse_value(&record.value))
            else {
                eprintln!(
                    "warning: cache {}:{}: unparseable record skipped ({})",
                    store.path.display(),
                    lineno + 1,
                    record.key
                );
                continue;
            };
            if let Some(prev) = store.loaded.get(&record.key) {
                if prev != &record.value {
                    return Err(format!(
                        "cache {}:{}: duplicate key {} with conflicting values {} vs {}",
                        store.path.display(),
                        lineno + 1,
                        record.key,
                        prev,
                        record.value
                    ));
                }
                continue;
            }
            match parsed {
                ParsedKey::Plane(key) => plane.preload(key, value),
                ParsedKey::Quadric(key) => quadric.preload(key, value),
            }
            store.loaded.insert(record.key, record.value);
            store.loaded_count += 1;
        }
        Ok(store)
    }

    /// Append every memo entry not already in the file, under an
    /// exclusive advisory lock. Records are sorted by key.
    pub fn append_new(
        &mut self,
        plane: &PlaneEngine,
        quadric: &QuadricEngine,
    ) -> std::io::Result<()> {
        let mut fresh: Vec<CacheRecord> = Vec::new();
        for (key, value) in plane.snapshot().into_iter().chain(quadric.snapshot()) {
            if !self.loaded.contains_key(&key) {
                fresh.push(CacheRecord {
                    key,
                    value: value.to_string(),
                });
            }
        }
        if fresh.is_empty() {
            return Ok(());
        }
        fresh.sort_by(|a, b| a.key.cmp(&b.key));
        if let Some(parent) = self.path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.lock()?;
        let mut buf = String::new();
        for record in &fresh {
            buf.push_str(&serde_json::to_string(record).expect("record serializes"));
            buf.push('\n');
        }
        let result = (&file).write_all(buf.as_bytes());
        let _ = file.unlock();
        result?;
        self.appended_count = fresh.len();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_parsing_round_trip() {
        let key = "p2|4|1|2|0,1";
        match parse_key(key).unwrap() {
            ParsedKey::Plane(k) => assert_eq!(k.to_cache_key(), key),
            _ => panic!("wrong engine"),
        }
        let key = "f0|2|2|1||2";
        match parse_key(key).unwrap() {
            ParsedKey::Quadric(k) => assert_eq!(k.to_cache_key(), key),
            _ => panic!("wrong engine"),
        }
        assert!(parse_key("p3|1|0||1").is_none());
        assert!(parse_key("p2|x|0||1").is_none());
        // budget violation in a syntactically fine key
        assert!(parse_key("p2|3|0||2").is_none());
    }

    #[test]
    fn value_parsing_rejects_garbage() {
        assert!(parse_value("12").is_some());
        assert!(parse_value("-3").is_none());
        assert!(parse_value("1.5").is_none());
    }
}
