//! Persistent basis cache backed by a directory of content-addressed files.
//!
//! Each entry is stored under the hex SHA-256 of its full key material; the
//! file holds the key material followed by the payload so an (astronomically
//! unlikely) hash collision is detected on read instead of returning a wrong
//! basis. Writes go to a temporary file in the same directory and are moved
//! into place atomically, so concurrent workers never observe a torn entry.

use cyclemap_core::groebner::GbCache;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

const SEPARATOR: &str = "\n---payload---\n";

pub struct FileCache {
    dir: PathBuf,
    hits: AtomicU64,
}

impl FileCache {
    pub fn new(dir: PathBuf) -> std::io::Result<FileCache> {
        fs::create_dir_all(&dir)?;
        Ok(FileCache {
            dir,
            hits: AtomicU64::new(0),
        })
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{}.gb", hex::encode(digest)))
    }
}

impl GbCache for FileCache {
    fn get(&self, key: &str) -> Option<String> {
        let body = fs::read_to_string(self.path_for(key)).ok()?;
        let (stored_key, payload) = body.split_once(SEPARATOR)?;
        if stored_key != key {
            return None;
        }
        self.hits.fetch_add(1, Ordering::Relaxed);
        Some(payload.to_string())
    }

    fn put(&self, key: &str, value: &str) {
        let Ok(mut tmp) = tempfile::NamedTempFile::new_in(&self.dir) else {
            return;
        };
        if tmp
            .write_all(format!("{key}{SEPARATOR}{value}").as_bytes())
            .is_err()
        {
            return;
        }
        let _ = tmp.persist(self.path_for(key));
    }
}
