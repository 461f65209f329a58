//! Ports for the learned and lexical components of the pipeline, each with a
//! deterministic reference implementation.
//!
//! Every port is a pure function of its inputs and configuration and must be
//! safe to call from several threads at once.

pub mod embed;
pub mod lexicon;
pub mod parser;
pub mod summarize;
pub mod tokenize;
pub mod wordnet;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use embed::{inner_product, EmbeddingVector, HashingEmbedder};
pub use lexicon::{Lexicon, WordClass};
pub use parser::RuleBasedParser;
pub use summarize::LeadSentenceSummarizer;
pub use wordnet::{LexicalKnowledgeBase, MostFrequentSense};

/// Coarse part-of-speech tags (Universal Dependencies inventory).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Propn,
    Verb,
    Aux,
    Adj,
    Adv,
    Det,
    Pron,
    Adp,
    Cconj,
    Sconj,
    Part,
    Num,
    Punct,
    Sym,
    Intj,
    X,
}

impl Pos {
    pub fn is_nominal(self) -> bool {
        matches!(self, Pos::Noun | Pos::Propn)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Propn => "PROPN",
            Pos::Verb => "VERB",
            Pos::Aux => "AUX",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Det => "DET",
            Pos::Pron => "PRON",
            Pos::Adp => "ADP",
            Pos::Cconj => "CCONJ",
            Pos::Sconj => "SCONJ",
            Pos::Part => "PART",
            Pos::Num => "NUM",
            Pos::Punct => "PUNCT",
            Pos::Sym => "SYM",
            Pos::Intj => "INTJ",
            Pos::X => "X",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One node of a dependency tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedToken {
    pub index: usize,
    pub text: String,
    pub lemma: String,
    pub pos: Pos,
    pub dep_label: String,
    /// Governing token; equals `index` for the root.
    pub head_index: usize,
    /// Character offsets within the parsed sentence.
    pub start: usize,
    pub end: usize,
    pub space_before: bool,
}

impl ParsedToken {
    pub fn is_root(&self) -> bool {
        self.head_index == self.index
    }
}

/// Checks the tree invariants: exactly one root, every head in range, no
/// cycles besides the root self-loop.
pub fn is_valid_tree(tokens: &[ParsedToken]) -> bool {
    if tokens.is_empty() {
        return false;
    }
    if tokens.iter().enumerate().any(|(i, t)| t.index != i || t.head_index >= tokens.len()) {
        return false;
    }
    if tokens.iter().filter(|t| t.is_root()).count() != 1 {
        return false;
    }
    tokens.iter().all(|t| {
        let mut cur = t.index;
        for _ in 0..=tokens.len() {
            if tokens[cur].is_root() {
                return true;
            }
            cur = tokens[cur].head_index;
        }
        false
    })
}

/// Dependency parser port.
pub trait DependencyParser: Send + Sync {
    /// Parses one sentence into a dependency tree.
    fn parse_sentence(&self, text: &str) -> Result<Vec<ParsedToken>>;

    /// Sentence spans of a paragraph, in character offsets.
    fn split_sentences(&self, text: &str) -> Vec<Range<usize>> {
        tokenize::split_sentences(text)
    }
}

/// Dual-encoder port: questions and contextualised answers embed into one space.
pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;

    /// Stable identifier of the model and its configuration; used to key caches.
    fn id(&self) -> String;

    fn embed_question(&self, question: &str) -> Result<EmbeddingVector>;

    fn embed_answer(&self, snippet: &str, context: &str) -> Result<EmbeddingVector>;
}

/// Summarizer port. Output length in characters never exceeds `budget`.
pub trait Summarizer: Send + Sync {
    fn summarize(&self, text: &str, budget: usize) -> String;
}

/// Lexical sense entry with its hypernym chain, most specific first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseEntry {
    pub sense_id: String,
    pub lemma: String,
    pub hypernyms: Vec<String>,
}

impl SenseEntry {
    /// The sense itself followed by its hypernyms.
    pub fn chain(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.sense_id.as_str()).chain(self.hypernyms.iter().map(String::as_str))
    }
}

/// Word-sense disambiguation port.
pub trait SenseDisambiguator: Send + Sync {
    fn disambiguate(&self, syntagm: &str, sentence_context: &str) -> Option<SenseEntry>;

    /// Lemma of a sense id, used to label taxonomy nodes.
    fn sense_lemma(&self, sense_id: &str) -> Option<String>;
}

impl<T: DependencyParser + ?Sized> DependencyParser for std::sync::Arc<T> {
    fn parse_sentence(&self, text: &str) -> Result<Vec<ParsedToken>> {
        (**self).parse_sentence(text)
    }

    fn split_sentences(&self, text: &str) -> Vec<Range<usize>> {
        (**self).split_sentences(text)
    }
}

impl<T: Embedder + ?Sized> Embedder for std::sync::Arc<T> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn id(&self) -> String {
        (**self).id()
    }

    fn embed_question(&self, question: &str) -> Result<EmbeddingVector> {
        (**self).embed_question(question)
    }

    fn embed_answer(&self, snippet: &str, context: &str) -> Result<EmbeddingVector> {
        (**self).embed_answer(snippet, context)
    }
}

impl<T: Summarizer + ?Sized> Summarizer for std::sync::Arc<T> {
    fn summarize(&self, text: &str, budget: usize) -> String {
        (**self).summarize(text, budget)
    }
}
