use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use super::PrimeError;

/// Magic header of the cache file; the trailing `01` is the format version.
pub const CACHE_MAGIC: &[u8; 8] = b"PIPOLY01";

/// Persistent store of exact `π(x)` values.
///
/// File layout: magic, little-endian `u64` pair count, then `(x, π(x))`
/// pairs as little-endian `u64`s sorted by `x`.
#[derive(Debug, Default)]
pub struct PrimeCountCache {
    entries: RwLock<BTreeMap<u64, u64>>,
    storage_path: Option<PathBuf>,
}

impl PrimeCountCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// A cache bound to `path`, loading it when the file exists.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, PrimeError> {
        let path = path.into();
        let entries = if path.exists() {
            read_entries(&path)?
        } else {
            BTreeMap::new()
        };
        Ok(PrimeCountCache {
            entries: RwLock::new(entries),
            storage_path: Some(path),
        })
    }

    pub fn storage_path(&self) -> Option<&Path> {
        self.storage_path.as_deref()
    }

    pub fn get(&self, x: u64) -> Option<u64> {
        self.entries.read().unwrap().get(&x).copied()
    }

    pub fn insert(&self, x: u64, pi: u64) {
        let mut entries = self.entries.write().unwrap();
        debug_assert!(entries
            .range(..x)
            .next_back()
            .map_or(true, |(_, &p)| p <= pi));
        debug_assert!(entries
            .range(x + 1..)
            .next()
            .map_or(true, |(_, &p)| p >= pi));
        entries.insert(x, pi);
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> Vec<(u64, u64)> {
        self.entries
            .read()
            .unwrap()
            .iter()
            .map(|(&x, &p)| (x, p))
            .collect()
    }

    /// Writes to the bound storage path, merging with what is already there.
    pub fn save(&self) -> Result<(), PrimeError> {
        let Some(path) = &self.storage_path else {
            return Ok(());
        };
        if path.exists() {
            let on_disk = read_entries(path)?;
            let mut entries = self.entries.write().unwrap();
            for (x, p) in on_disk {
                entries.entry(x).or_insert(p);
            }
        }
        self.save_to(path)
    }

    pub fn save_to(&self, path: &Path) -> Result<(), PrimeError> {
        let entries = self.entries.read().unwrap();
        let mut buf = Vec::with_capacity(16 + entries.len() * 16);
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
        for (&x, &p) in entries.iter() {
            buf.extend_from_slice(&x.to_le_bytes());
            buf.extend_from_slice(&p.to_le_bytes());
        }
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp).map_err(|e| io_error(path, e))?;
        f.write_all(&buf).map_err(|e| io_error(path, e))?;
        drop(f);
        fs::rename(&tmp, path).map_err(|e| io_error(path, e))
    }

    pub fn load_from(path: &Path) -> Result<Self, PrimeError> {
        Ok(PrimeCountCache {
            entries: RwLock::new(read_entries(path)?),
            storage_path: None,
        })
    }
}

fn io_error(path: &Path, e: io::Error) -> PrimeError {
    PrimeError::Cache(format!("{}: {e}", path.display()))
}

fn read_entries(path: &Path) -> Result<BTreeMap<u64, u64>, PrimeError> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| io_error(path, e))?;
    decode(&bytes).map_err(|msg| PrimeError::Cache(format!("{}: {msg}", path.display())))
}

fn decode(bytes: &[u8]) -> Result<BTreeMap<u64, u64>, String> {
    if bytes.len() < 16 || &bytes[..8] != CACHE_MAGIC {
        return Err("missing PIPOLY01 header".into());
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let body = &bytes[16..];
    if Some(body.len() as u64) != count.checked_mul(16) {
        return Err(format!(
            "expected {count} pairs, found {} bytes",
            body.len()
        ));
    }
    let mut entries = BTreeMap::new();
    let mut last: Option<(u64, u64)> = None;
    for pair in body.chunks_exact(16) {
        let x = u64::from_le_bytes(pair[..8].try_into().unwrap());
        let p = u64::from_le_bytes(pair[8..].try_into().unwrap());
        if let Some((lx, lp)) = last {
            if x <= lx || p < lp {
                return Err(format!("entries out of order at x = {x}"));
            }
        }
        last = Some((x, p));
        entries.insert(x, p);
    }
    Ok(entries)
}
