//! Template-triple knowledge graph: corpus ingestion, syntagm and triple
//! extraction, URI minting and composition subclassing.

mod build;
mod extract;
mod ingest;
pub mod io;
mod uri;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use build::{add_composition_subclasses, build_graph, realize_triple, BuildOptions};
pub use extract::{extract_syntagms, extract_template_triples, Syntagm, TripleDraft, GENERIC_QUALIFIERS};
pub use ingest::{ingest_corpus, strip_html, RawDocument};
pub use uri::{UriMinter, DEFAULT_NAMESPACE};

pub const SUBJ: &str = "{subj}";
pub const OBJ: &str = "{obj}";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: usize,
    pub title: String,
    pub paragraph_ids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub paragraph_id: usize,
    pub doc_id: usize,
    pub text: String,
}

/// A sentence and its character span inside the paragraph text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub sentence_id: usize,
    pub paragraph_id: usize,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

/// Ids are dense indices assigned in reading order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentCorpus {
    pub documents: Vec<Document>,
    pub paragraphs: Vec<Paragraph>,
    pub sentences: Vec<Sentence>,
}

impl DocumentCorpus {
    pub fn sentence(&self, id: usize) -> Option<&Sentence> {
        self.sentences.get(id)
    }

    pub fn paragraph(&self, id: usize) -> Option<&Paragraph> {
        self.paragraphs.get(id)
    }
}

/// One mention of a concept. Offsets are characters within the sentence;
/// `parts` holds the span of each label token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub sentence_id: usize,
    pub start: usize,
    pub end: usize,
    pub parts: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub uri: String,
    /// Surface text of the first mention, without determiners.
    pub label: String,
    /// Space-joined token lemmas.
    pub lemma: String,
    /// Per lemma token: whether it is a noun or proper noun.
    pub nominal: Vec<bool>,
    pub occurrences: Vec<Occurrence>,
}

impl Concept {
    pub fn lemma_tokens(&self) -> impl Iterator<Item = &str> {
        self.lemma.split(' ')
    }

    pub fn is_composite(&self) -> bool {
        self.nominal.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateTriple {
    pub triple_id: usize,
    pub subject_uri: String,
    pub template: String,
    pub object_uri: String,
    /// Exact phrases of this mention, used for realization.
    pub subject_surface: String,
    pub object_surface: String,
    pub sentence_id: usize,
    pub paragraph_id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKey {
    Concept(String),
    Triple(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceEdge {
    pub source: SourceKey,
    pub sentence_id: usize,
}

/// Immutable graph of concepts and template triples over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeGraph {
    pub namespace: String,
    pub corpus: DocumentCorpus,
    pub concepts: BTreeMap<String, Concept>,
    pub triples: Vec<TemplateTriple>,
    /// (sub_uri, super_uri)
    pub subclass_edges: BTreeSet<(String, String)>,
    pub source_edges: BTreeSet<SourceEdge>,
    /// Sentences that failed to parse.
    pub warnings: Vec<String>,
}

impl KnowledgeGraph {
    pub fn concept(&self, uri: &str) -> Option<&Concept> {
        self.concepts.get(uri)
    }

    pub fn contains(&self, uri: &str) -> bool {
        self.concepts.contains_key(uri)
    }

    pub fn triple(&self, id: usize) -> Option<&TemplateTriple> {
        self.triples.get(id)
    }

    /// Triples whose subject or object is `uri`, in id order.
    pub fn triples_of<'a>(&'a self, uri: &'a str) -> impl Iterator<Item = &'a TemplateTriple> + 'a {
        self.triples.iter().filter(move |t| t.subject_uri == uri || t.object_uri == uri)
    }

    /// Direct composition superclasses of `uri`.
    pub fn composition_supers<'a>(&'a self, uri: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.subclass_edges.range((uri.to_string(), String::new())..).take_while(move |(sub, _)| sub == uri).map(|(_, sup)| sup.as_str())
    }
}
