//! Reference dual encoder: hashed bag of lemmas.

use serde::{Deserialize, Serialize};

use super::lexicon::Lexicon;
use super::tokenize::tokenize;
use super::Embedder;
use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION: usize = 512;
pub const DEFAULT_CONTEXT_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingVector(pub Vec<f64>);

impl EmbeddingVector {
    pub fn zeros(dimension: usize) -> Self {
        EmbeddingVector(vec![0.0; dimension])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > 0.0 {
            self.0.iter_mut().for_each(|v| *v /= norm);
        }
        self
    }
}

pub fn inner_product(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum()
}

/// FNV-1a, 64 bit.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// Term-frequency bag of lemmas hashed into `dimension` buckets, L2-normalized.
/// The answer side adds the context paragraph's lemmas scaled by `context_weight`.
#[derive(Debug, Clone)]
pub struct HashingEmbedder {
    dimension: usize,
    context_weight: f64,
    lexicon: &'static Lexicon,
}

impl Default for HashingEmbedder {
    fn default() -> Self {
        HashingEmbedder::new(DEFAULT_DIMENSION, DEFAULT_CONTEXT_WEIGHT)
    }
}

impl HashingEmbedder {
    pub fn new(dimension: usize, context_weight: f64) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        HashingEmbedder { dimension, context_weight, lexicon: Lexicon::english() }
    }

    pub fn bucket(&self, lemma: &str) -> usize {
        (fnv1a(lemma.as_bytes()) % self.dimension as u64) as usize
    }

    /// Lemmas of the word tokens of `text`; punctuation is dropped.
    pub fn lemmas(&self, text: &str) -> Vec<String> {
        tokenize(text).into_iter().filter(|t| t.text.chars().any(char::is_alphanumeric)).map(|t| self.lexicon.lemma(&t.text)).collect()
    }

    fn accumulate(&self, values: &mut [f64], text: &str, weight: f64) {
        for lemma in self.lemmas(text) {
            values[self.bucket(&lemma)] += weight;
        }
    }
}

impl Embedder for HashingEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn id(&self) -> String {
        format!("hashing-bow/d={}/ctx={}", self.dimension, self.context_weight)
    }

    fn embed_question(&self, question: &str) -> Result<EmbeddingVector> {
        let mut values = vec![0.0; self.dimension];
        self.accumulate(&mut values, question, 1.0);
        Ok(EmbeddingVector(values).normalized())
    }

    fn embed_answer(&self, snippet: &str, context: &str) -> Result<EmbeddingVector> {
        if snippet.trim().is_empty() {
            return Err(Error::EmptyInput("answer snippet"));
        }
        let mut values = vec![0.0; self.dimension];
        self.accumulate(&mut values, snippet, 1.0);
        self.accumulate(&mut values, context, self.context_weight);
        Ok(EmbeddingVector(values).normalized())
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    // Collision-free cosine over lemma counts; independent of the hashing path.
    fn bag_cosine(lex: &Lexicon, q: &str, snippet: &str, context: &str, cw: f64) -> f64 {
        let bag = |text: &str, w: f64, acc: &mut BTreeMap<String, f64>| {
            for t in tokenize(text) {
                if t.text.chars().any(char::is_alphanumeric) {
                    *acc.entry(lex.lemma(&t.text)).or_default() += w;
                }
            }
        };
        let mut qb = BTreeMap::new();
        bag(q, 1.0, &mut qb);
        let mut ab = BTreeMap::new();
        bag(snippet, 1.0, &mut ab);
        bag(context, cw, &mut ab);
        let dot: f64 = qb.iter().map(|(k, v)| v * ab.get(k).copied().unwrap_or(0.0)).sum();
        let nq = qb.values().map(|v| v * v).sum::<f64>().sqrt();
        let na = ab.values().map(|v| v * v).sum::<f64>().sqrt();
        dot / (nq * na)
    }

    #[test]
    fn question_embedding_is_deterministic_and_unit() {
        let e = HashingEmbedder::default();
        let a = e.embed_question("why").unwrap();
        let b = e.embed_question("why").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), DEFAULT_DIMENSION);
        assert!((inner_product(&a, &a) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_question_is_zero_vector() {
        let e = HashingEmbedder::default();
        let z = e.embed_question("").unwrap();
        assert!(z.0.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn empty_snippet_is_rejected() {
        let e = HashingEmbedder::default();
        assert!(matches!(e.embed_answer("  ", "ctx"), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn overlap_ranks_related_snippet_higher() {
        let e = HashingEmbedder::default();
        let lex = Lexicon::english();
        let q = e.embed_question("hard inquiry").unwrap();
        let related = "a hard inquiry lowers your score";
        let unrelated = "November is a month";
        let s1 = inner_product(&q, &e.embed_answer(related, related).unwrap());
        let s2 = inner_product(&q, &e.embed_answer(unrelated, unrelated).unwrap());
        // oracle: {a, hard, inquiry, lower, your, score} uniformly weighted
        let o1 = bag_cosine(lex, "hard inquiry", related, related, 0.5);
        let o2 = bag_cosine(lex, "hard inquiry", unrelated, unrelated, 0.5);
        assert!((o1 - 2.0 / 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(o2, 0.0);
        assert!((s1 - o1).abs() < 1e-9, "{s1} vs {o1}");
        assert!((s2 - o2).abs() < 1e-9, "{s2} vs {o2}");
        assert!(s1 > s2);
    }

    #[test]
    fn context_is_down_weighted() {
        let e = HashingEmbedder::default();
        let lex = Lexicon::english();
        let q = e.embed_question("credit score").unwrap();
        let s = inner_product(&q, &e.embed_answer("payment history", "your credit score matters").unwrap());
        let o = bag_cosine(lex, "credit score", "payment history", "your credit score matters", 0.5);
        assert!((s - o).abs() < 1e-9);
    }
}
