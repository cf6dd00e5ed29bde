//! Content-addressed store for stage results.
//!
//! An entry lives at `<dir>/<sha256 of the key JSON>.json` and holds the
//! key, the payload and the sha256 of the payload bytes. A lookup only
//! trusts an entry whose key matches and whose digest verifies; anything
//! else is deleted and reported as a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever the stored layout or any cached type changes.
const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    key: Value,
    digest: String,
    payload: String,
}

/// Outcome of a lookup, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// An entry existed but failed validation and was removed.
    Discarded,
    Disabled,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    fn path_for(dir: &Path, key: &Value) -> PathBuf {
        let canonical = serde_json::to_vec(key).expect("JSON values serialize");
        dir.join(format!("{}.json", sha256_hex(&canonical)))
    }

    /// Look up the value stored under `key`.
    pub fn get<K: Serialize, T: DeserializeOwned>(&self, key: &K) -> (Option<T>, Lookup) {
        let Some(dir) = &self.dir else { return (None, Lookup::Disabled) };
        let key = serde_json::to_value(key).expect("cache keys serialize");
        let path = Self::path_for(dir, &key);
        let Ok(bytes) = fs::read(&path) else { return (None, Lookup::Miss) };
        let valid = serde_json::from_slice::<Entry>(&bytes).ok().and_then(|e| {
            if e.version != CACHE_VERSION || e.key != key || sha256_hex(e.payload.as_bytes()) != e.digest {
                return None;
            }
            serde_json::from_str::<T>(&e.payload).ok()
        });
        match valid {
            Some(v) => (Some(v), Lookup::Hit),
            None => {
                let _ = fs::remove_file(&path);
                (None, Lookup::Discarded)
            }
        }
    }

    /// Store `value` under `key`, atomically. Failures are non-fatal and
    /// returned for reporting.
    pub fn put<K: Serialize, T: Serialize>(&self, key: &K, value: &T) -> std::io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let key = serde_json::to_value(key).map_err(std::io::Error::other)?;
        let payload = serde_json::to_string(value).map_err(std::io::Error::other)?;
        let entry = Entry { version: CACHE_VERSION, digest: sha256_hex(payload.as_bytes()), key: key.clone(), payload };
        let path = Self::path_for(dir, &key);
        write_atomic(&path, &serde_json::to_vec(&entry).map_err(std::io::Error::other)?)
    }
}

/// Write through a temporary sibling and rename it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_lookup_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let key = ("zeta", 2, "t", 30);
        assert_eq!(cache.get::<_, Vec<u32>>(&key).1, Lookup::Miss);
        cache.put(&key, &vec![1u32, 0, 1]).unwrap();
        assert_eq!(cache.get::<_, Vec<u32>>(&key), (Some(vec![1, 0, 1]), Lookup::Hit));
    }

    #[test]
    fn corrupted_entries_are_discarded() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let key = ("lattice", 3);
        cache.put(&key, &vec![7u32, 8]).unwrap();
        let path = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
        let text = fs::read_to_string(&path).unwrap().replace("[7,8]", "[7,9]");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.get::<_, Vec<u32>>(&key), (None, Lookup::Discarded));
        assert!(!path.exists());
        fs::write(dir.path().join("garbage.json"), b"{").unwrap();
        assert_eq!(cache.get::<_, Vec<u32>>(&key).1, Lookup::Miss);
    }

    #[test]
    fn disabled_cache_never_hits() {
        let cache = Cache::disabled();
        cache.put(&1, &2).unwrap();
        assert_eq!(cache.get::<_, i32>(&1), (None, Lookup::Disabled));
    }
}
