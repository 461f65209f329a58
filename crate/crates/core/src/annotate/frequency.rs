use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kg::KnowledgeGraph;

pub const DEFAULT_RANK_CUTOFF: usize = 1_000;

/// Word frequency ranks, 1 = most frequent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    ranks: HashMap<String, usize>,
}

impl FrequencyTable {
    /// Bundled English table.
    pub fn english() -> &'static FrequencyTable {
        static TABLE: std::sync::OnceLock<FrequencyTable> = std::sync::OnceLock::new();
        TABLE.get_or_init(|| FrequencyTable::from_tsv(include_str!("../../data/frequency.tsv")).expect("bundled frequency table parses"))
    }

    /// `lemma<TAB>rank` lines; `#` starts a comment line.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut ranks = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| Error::Format { what: "frequency table", line: i + 1, reason: reason.to_string() };
            let (lemma, rank) = line.split_once('\t').ok_or_else(|| bad("expected lemma<TAB>rank"))?;
            let rank: usize = rank.trim().parse().map_err(|_| bad("rank is not a positive integer"))?;
            if rank == 0 {
                return Err(bad("rank must be at least 1"));
            }
            let e = ranks.entry(lemma.trim().to_lowercase()).or_insert(rank);
            *e = (*e).min(rank);
        }
        Ok(FrequencyTable { ranks })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("frequency table {}: {e}", path.display())))?;
        Self::from_tsv(&text)
    }

    pub fn rank(&self, lemma: &str) -> Option<usize> {
        self.ranks.get(&lemma.to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// True iff every lemma is ranked within `cutoff`.
    pub fn all_common<'a>(&self, lemmas: impl IntoIterator<Item = &'a str>, cutoff: usize) -> bool {
        let mut any = false;
        for l in lemmas {
            any = true;
            if self.rank(l).is_none_or(|r| r > cutoff) {
                return false;
            }
        }
        any
    }
}

/// Whether every token lemma of the concept ranks within `cutoff`.
pub fn is_common_knowledge(kg: &KnowledgeGraph, uri: &str, table: &FrequencyTable, cutoff: usize) -> Result<bool> {
    let concept = kg.concept(uri).ok_or_else(|| Error::MissingConcept(uri.to_string()))?;
    Ok(table.all_common(concept.lemma_tokens(), cutoff))
}
