use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::kg::io::read_jsonl;
use crate::nlp::{Embedder, EmbeddingVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedEmbedding {
    pub key: String,
    pub vector: EmbeddingVector,
}

/// Memoizes an embedder by content hash. Keys include the embedder id, so a
/// different embedder never reuses stale vectors.
pub struct CachingEmbedder {
    inner: Arc<dyn Embedder>,
    entries: RwLock<HashMap<String, EmbeddingVector>>,
}

impl CachingEmbedder {
    pub fn new(inner: Arc<dyn Embedder>) -> Self {
        CachingEmbedder { inner, entries: RwLock::new(HashMap::new()) }
    }

    pub fn key(&self, side: &str, text: &str, context: &str) -> String {
        let mut h = Sha256::new();
        for part in [self.inner.id().as_str(), side, text, context] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }

    fn cached(&self, key: String, compute: impl FnOnce() -> Result<EmbeddingVector>) -> Result<EmbeddingVector> {
        if let Some(v) = self.entries.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = compute()?;
        self.entries.write().expect("cache lock").entry(key).or_insert_with(|| v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries sorted by key.
    pub fn entries(&self) -> Vec<CachedEmbedding> {
        let map = self.entries.read().expect("cache lock");
        let sorted: BTreeMap<&String, &EmbeddingVector> = map.iter().collect();
        sorted.into_iter().map(|(k, v)| CachedEmbedding { key: k.clone(), vector: v.clone() }).collect()
    }

    /// Loads entries written by [`CachingEmbedder::entries`]; vectors of the
    /// wrong dimension are ignored.
    pub fn load_jsonl(&self, text: &str) -> Result<usize> {
        let records: Vec<CachedEmbedding> = read_jsonl(text, "embedding cache entry")?;
        let dim = self.inner.dimension();
        let mut map = self.entries.write().expect("cache lock");
        let mut loaded = 0;
        for r in records.into_iter().filter(|r| r.vector.len() == dim) {
            map.insert(r.key, r.vector);
            loaded += 1;
        }
        Ok(loaded)
    }
}

impl Embedder for CachingEmbedder {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn id(&self) -> String {
        self.inner.id()
    }

    fn embed_question(&self, question: &str) -> Result<EmbeddingVector> {
        self.cached(self.key("q", question, ""), || self.inner.embed_question(question))
    }

    fn embed_answer(&self, snippet: &str, context: &str) -> Result<EmbeddingVector> {
        self.cached(self.key("a", snippet, context), || self.inner.embed_answer(snippet, context))
    }
}
