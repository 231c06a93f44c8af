//! Content-addressed result cache. Entries live in `<dir>/<sha256>.json` and
//! carry a digest of their payload so truncated or edited files are detected.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    payload: Value,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        let dir = dir.and_then(|d| match fs::create_dir_all(&d) {
            Ok(()) => Some(d),
            Err(e) => {
                eprintln!(
                    "warning: cache directory {} unusable ({e}); running uncached",
                    d.display()
                );
                None
            }
        });
        Cache { dir }
    }

    pub fn key(parts: &[&str]) -> String {
        let mut s = format!("chevpoly {}", env!("CARGO_PKG_VERSION"));
        for p in parts {
            s.push('\u{1f}');
            s.push_str(p);
        }
        s
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join(format!("{}.json", sha_hex(key.as_bytes())))
    }

    fn load(&self, key: &str) -> Option<Value> {
        let dir = self.dir.as_ref()?;
        let path = Self::path(dir, key);
        let text = fs::read(&path).ok()?;
        let entry: Option<Entry> = serde_json::from_slice(&text).ok();
        match entry {
            Some(e) if e.key == key && e.digest == sha_hex(e.payload.to_string().as_bytes()) => Some(e.payload),
            _ => {
                eprintln!("warning: discarding corrupted cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    fn store(&self, key: &str, payload: &Value) {
        let Some(dir) = &self.dir else { return };
        let entry = Entry {
            key: key.to_string(),
            digest: sha_hex(payload.to_string().as_bytes()),
            payload: payload.clone(),
        };
        let result = (|| -> std::io::Result<()> {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
            tmp.persist(Self::path(dir, key)).map_err(|e| e.error)?;
            Ok(())
        })();
        if let Err(e) = result {
            eprintln!("warning: could not write cache entry ({e})");
        }
    }

    /// Read-through lookup; `compute` runs on a miss and its result is stored.
    pub fn get_or_compute<T, E>(&self, key: &str, compute: impl FnOnce() -> Result<T, E>) -> Result<(T, bool), E>
    where
        T: Serialize + for<'de> Deserialize<'de>,
    {
        if let Some(v) = self.load(key) {
            if let Ok(t) = serde_json::from_value(v) {
                return Ok((t, true));
            }
        }
        let t = compute()?;
        if let Ok(v) = serde_json::to_value(&t) {
            self.store(key, &v);
        }
        Ok((t, false))
    }
}
