//! Lexical knowledge base (noun senses and hypernym links) and the reference
//! most-frequent-sense disambiguator.
//!
//! Two on-disk formats are accepted:
//!
//! * a TSV dump, one `sense_id<TAB>lemma<TAB>hypernym_sense_id` per line, where
//!   the first line mentioning a lemma gives its most frequent sense;
//! * a WordNet 3.x database directory (`index.noun` and `data.noun`).

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use super::lexicon::Lexicon;
use super::{SenseDisambiguator, SenseEntry};
use crate::error::{Error, Result};

const DEFAULT_KB: &str = include_str!("../../data/lexical_kb.tsv");

#[derive(Debug, Clone, Default)]
pub struct LexicalKnowledgeBase {
    lemma_of: HashMap<String, String>,
    hypernym_of: HashMap<String, String>,
    senses_by_lemma: HashMap<String, Vec<String>>,
}

fn normalize_lemma(s: &str) -> String {
    s.replace('_', " ").split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

impl LexicalKnowledgeBase {
    /// Knowledge base compiled into the crate (derived from WordNet 3.0).
    pub fn english() -> Arc<LexicalKnowledgeBase> {
        static KB: OnceLock<Arc<LexicalKnowledgeBase>> = OnceLock::new();
        KB.get_or_init(|| Arc::new(LexicalKnowledgeBase::from_tsv(DEFAULT_KB).expect("bundled knowledge base is well-formed"))).clone()
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut kb = LexicalKnowledgeBase::default();
        for (n, line) in text.lines().enumerate() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 || cols.len() > 3 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(Error::Format {
                    what: "lexical knowledge base",
                    line: n + 1,
                    reason: "expected `sense_id<TAB>lemma<TAB>hypernym_sense_id`".into(),
                });
            }
            let hypernym = cols.get(2).copied().unwrap_or("");
            kb.add(cols[0], cols[1], (!hypernym.is_empty()).then_some(hypernym));
        }
        Ok(kb)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        if path.is_dir() {
            return Self::from_wordnet_dir(path);
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }

    /// Reads `index.noun` and `data.noun` of a WordNet 3.x database.
    pub fn from_wordnet_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read(&path).map(|bytes| bytes.iter().map(|&b| b as char).collect::<String>()).map_err(|e| Error::io(path, e))
        };
        Self::from_wordnet(&read("index.noun")?, &read("data.noun")?)
    }

    pub fn from_wordnet(index_noun: &str, data_noun: &str) -> Result<Self> {
        let bad = |what, line: usize, reason: &str| Error::Format { what, line: line + 1, reason: reason.to_string() };
        // lemma -> synset offsets, most frequent first
        let mut index: Vec<(String, Vec<String>)> = Vec::new();
        let mut offsets_of: HashMap<String, Vec<String>> = HashMap::new();
        for (n, line) in index_noun.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let parse = |i: usize| -> Result<usize> { f.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| bad("index.noun", n, "bad count field")) };
            let synset_cnt = parse(2)?;
            let p_cnt = parse(3)?;
            let first = 6 + p_cnt;
            let offsets: Vec<String> = f
                .get(first..first + synset_cnt)
                .ok_or_else(|| bad("index.noun", n, "truncated offset list"))?
                .iter()
                .map(|s| s.to_string())
                .collect();
            offsets_of.insert(f[0].to_string(), offsets.clone());
            index.push((f[0].to_string(), offsets));
        }
        // offset -> (first word, hypernym offset)
        let mut synsets: HashMap<String, (String, Option<String>)> = HashMap::new();
        for (n, line) in data_noun.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let head = line.split(" | ").next().unwrap_or(line);
            let f: Vec<&str> = head.split_whitespace().collect();
            let w_cnt = f.get(3).and_then(|s| usize::from_str_radix(s, 16).ok()).ok_or_else(|| bad("data.noun", n, "bad word count"))?;
            let first_word = f.get(4).ok_or_else(|| bad("data.noun", n, "missing word"))?.to_lowercase();
            let p_at = 4 + 2 * w_cnt;
            let p_cnt: usize = f.get(p_at).and_then(|s| s.parse().ok()).ok_or_else(|| bad("data.noun", n, "bad pointer count"))?;
            let mut hypernym = None;
            for j in 0..p_cnt {
                let base = p_at + 1 + 4 * j;
                let (Some(sym), Some(target), Some(pos)) = (f.get(base), f.get(base + 1), f.get(base + 2)) else {
                    return Err(bad("data.noun", n, "truncated pointer"));
                };
                if (*sym == "@" || *sym == "@i") && *pos == "n" {
                    hypernym = Some(target.to_string());
                    break;
                }
            }
            synsets.insert(f[0].to_string(), (first_word, hypernym));
        }
        let name = |offset: &str| -> String {
            match synsets.get(offset) {
                Some((word, _)) => {
                    let num = offsets_of.get(word).and_then(|offs| offs.iter().position(|o| o == offset)).map_or(1, |p| p + 1);
                    format!("{word}.n.{num:02}")
                }
                None => format!("{offset}.n"),
            }
        };
        let mut kb = LexicalKnowledgeBase::default();
        for (lemma, offsets) in &index {
            for offset in offsets {
                let Some((word, hypernym)) = synsets.get(offset) else { continue };
                let hypernym = hypernym.as_deref().map(&name);
                let id = name(offset);
                kb.lemma_of.entry(id.clone()).or_insert_with(|| normalize_lemma(word));
                if let Some(h) = hypernym {
                    kb.hypernym_of.entry(id.clone()).or_insert(h);
                }
                kb.add_sense(lemma, &id);
            }
        }
        for (offset, (word, hypernym)) in &synsets {
            let id = name(offset);
            if !kb.lemma_of.contains_key(&id) {
                kb.add(&id, word, hypernym.as_deref().map(&name).as_deref());
            }
        }
        Ok(kb)
    }

    fn add(&mut self, sense_id: &str, lemma: &str, hypernym: Option<&str>) {
        let lemma = normalize_lemma(lemma);
        // the head word named in the sense id wins over other synonyms
        let head = sense_id.split('.').next().map(normalize_lemma);
        if head.as_deref() == Some(lemma.as_str()) {
            self.lemma_of.insert(sense_id.to_string(), lemma.clone());
        } else {
            self.lemma_of.entry(sense_id.to_string()).or_insert_with(|| lemma.clone());
        }
        if let Some(h) = hypernym {
            self.hypernym_of.entry(sense_id.to_string()).or_insert_with(|| h.to_string());
        }
        self.add_sense(&lemma, sense_id);
    }

    fn add_sense(&mut self, lemma: &str, sense_id: &str) {
        let senses = self.senses_by_lemma.entry(normalize_lemma(lemma)).or_default();
        if !senses.iter().any(|s| s == sense_id) {
            senses.push(sense_id.to_string());
        }
    }

    /// Senses of `lemma`, most frequent first.
    pub fn senses(&self, lemma: &str) -> &[String] {
        self.senses_by_lemma.get(&normalize_lemma(lemma)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sense_lemma(&self, sense_id: &str) -> Option<&str> {
        self.lemma_of.get(sense_id).map(String::as_str)
    }

    /// Hypernym chain above `sense_id`, most specific first. Stops on a cycle.
    pub fn hypernym_chain(&self, sense_id: &str) -> Vec<String> {
        let mut chain = Vec::new();
        let mut seen = HashSet::from([sense_id.to_string()]);
        let mut cur = sense_id;
        while let Some(next) = self.hypernym_of.get(cur) {
            if !seen.insert(next.clone()) {
                break;
            }
            chain.push(next.clone());
            cur = next;
        }
        chain
    }

    pub fn entry(&self, sense_id: &str) -> Option<SenseEntry> {
        let lemma = self.lemma_of.get(sense_id)?;
        Some(SenseEntry { sense_id: sense_id.to_string(), lemma: lemma.clone(), hypernyms: self.hypernym_chain(sense_id) })
    }

    pub fn len(&self) -> usize {
        self.lemma_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemma_of.is_empty()
    }
}

/// Reference disambiguator: the most frequent sense of the lemma, ignoring context.
#[derive(Debug, Clone)]
pub struct MostFrequentSense {
    kb: Arc<LexicalKnowledgeBase>,
}

impl MostFrequentSense {
    pub fn new(kb: Arc<LexicalKnowledgeBase>) -> Self {
        MostFrequentSense { kb }
    }

    pub fn english() -> Self {
        MostFrequentSense::new(LexicalKnowledgeBase::english())
    }

    pub fn knowledge_base(&self) -> &LexicalKnowledgeBase {
        &self.kb
    }
}

impl SenseDisambiguator for MostFrequentSense {
    fn disambiguate(&self, syntagm: &str, _sentence_context: &str) -> Option<SenseEntry> {
        let direct = self.kb.senses(syntagm).first();
        let sense = direct.or_else(|| {
            let lex = Lexicon::english();
            let lemma: Vec<String> = syntagm.split_whitespace().map(|w| lex.noun_lemma(w)).collect();
            self.kb.senses(&lemma.join(" ")).first()
        })?;
        self.kb.entry(sense)
    }

    fn sense_lemma(&self, sense_id: &str) -> Option<String> {
        self.kb.sense_lemma(sense_id).map(str::to_string)
    }
}
