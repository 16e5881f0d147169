//! Content-addressed response cache.
//!
//! Keys are `sha256(provider_id || canonical request)`, entries live under
//! `cache/<provider_id>/<key>`. A broken cache store degrades to
//! pass-through with a logged warning rather than failing the call.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::fsutil::write_atomic;

use super::ProviderError;

/// Derives the cache key for a `(provider_id, canonical request)` pair.
/// Identical pairs always map to identical keys.
pub fn cache_key(provider_id: &str, canonical_request: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(provider_id.as_bytes());
    hasher.update([0u8]);
    hasher.update(canonical_request.as_bytes());
    hex::encode(hasher.finalize())
}

#[derive(Debug, Clone)]
pub struct CacheStore {
    root: PathBuf,
}

impl CacheStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CacheStore { root: root.into() }
    }

    fn entry_path(&self, provider_id: &str, key: &str) -> PathBuf {
        self.root.join(provider_id).join(key)
    }

    pub fn get(&self, provider_id: &str, key: &str) -> Option<Vec<u8>> {
        std::fs::read(self.entry_path(provider_id, key)).ok()
    }

    pub fn put(&self, provider_id: &str, key: &str, bytes: &[u8]) -> std::io::Result<()> {
        write_atomic(&self.entry_path(provider_id, key), bytes)
    }
}

/// Read-or-compute through the cache.
///
/// A second call with the same `(provider_id, canonical request)` returns
/// the stored response without touching the upstream. Store I/O failures
/// degrade to pass-through.
pub fn cached_call(
    store: Option<&CacheStore>,
    provider_id: &str,
    canonical_request: &str,
    upstream: impl FnOnce() -> Result<Vec<u8>, ProviderError>,
) -> Result<(Vec<u8>, String), ProviderError> {
    let key = cache_key(provider_id, canonical_request);
    let Some(store) = store else {
        return Ok((upstream()?, key));
    };
    if let Some(bytes) = store.get(provider_id, &key) {
        return Ok((bytes, key));
    }
    let bytes = upstream()?;
    if let Err(e) = store.put(provider_id, &key, &bytes) {
        log::warn!("cache store unavailable for `{provider_id}`, passing through: {e}");
    }
    Ok((bytes, key))
}

#[cfg(test)]
mod tests {
    use std::sync::atomic::{AtomicU32, Ordering};

    use super::*;

    #[test]
    fn second_identical_call_hits_cache() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::new(dir.path());
        let calls = AtomicU32::new(0);
        let upstream = || {
            calls.fetch_add(1, Ordering::SeqCst);
            Ok(b"response".to_vec())
        };
        let (a, key_a) = cached_call(Some(&store), "chat", "req", upstream).unwrap();
        let (b, key_b) = cached_call(Some(&store), "chat", "req", || {
            calls.fetch_add(1, Ordering::SeqCst);
            Ok(b"different".to_vec())
        })
        .unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        assert_eq!(a, b);
        assert_eq!(key_a, key_b);
    }

    #[test]
    fn different_requests_do_not_collide() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::new(dir.path());
        let calls = AtomicU32::new(0);
        for req in ["temperature=0.1", "temperature=0.9"] {
            let (_, _) = cached_call(Some(&store), "chat", req, || {
                calls.fetch_add(1, Ordering::SeqCst);
                Ok(req.as_bytes().to_vec())
            })
            .unwrap();
        }
        assert_eq!(calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn unwritable_store_degrades_to_pass_through() {
        let dir = tempfile::tempdir().unwrap();
        // Point the store root at a regular file: every put fails.
        let blocker = dir.path().join("not-a-dir");
        std::fs::write(&blocker, b"x").unwrap();
        let store = CacheStore::new(&blocker);
        let calls = AtomicU32::new(0);
        for _ in 0..2 {
            let (bytes, _) = cached_call(Some(&store), "chat", "req", || {
                calls.fetch_add(1, Ordering::SeqCst);
                Ok(b"fresh".to_vec())
            })
            .unwrap();
            assert_eq!(bytes, b"fresh");
        }
        assert_eq!(calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn keys_separate_providers() {
        assert_ne!(cache_key("chat", "req"), cache_key("image", "req"));
    }
}
