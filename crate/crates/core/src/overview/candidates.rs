use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kg::{realize_triple, KnowledgeGraph};
use crate::taxonomy::Taxonomy;

/// A snippet to score: a realized triple or one of its phrases, with the
/// paragraph the triple came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub snippet: String,
    pub context_paragraph_id: usize,
    pub context: String,
    pub triple_id: usize,
}

/// Candidates from every triple touching `uri` or one of its subclasses, in
/// triple order (realized triple, then subject, then object phrase), keeping
/// the first of each (snippet, paragraph) pair.
pub fn gather_candidates(kg: &KnowledgeGraph, taxonomy: &Taxonomy, uri: &str) -> Result<Vec<Candidate>> {
    if !kg.contains(uri) && !taxonomy.contains(uri) {
        return Err(Error::MissingConcept(uri.to_string()));
    }
    let subtree: HashSet<String> =
        if taxonomy.contains(uri) { taxonomy.subtree(uri)?.into_iter().collect() } else { HashSet::from([uri.to_string()]) };
    let mut seen: BTreeSet<(String, usize)> = BTreeSet::new();
    let mut out = Vec::new();
    for t in &kg.triples {
        if !subtree.contains(&t.subject_uri) && !subtree.contains(&t.object_uri) {
            continue;
        }
        let context = kg.corpus.paragraph(t.paragraph_id).map(|p| p.text.clone()).unwrap_or_default();
        let realized = realize_triple(t, kg)?;
        for snippet in [realized, t.subject_surface.clone(), t.object_surface.clone()] {
            if snippet.trim().is_empty() || !seen.insert((snippet.clone(), t.paragraph_id)) {
                continue;
            }
            out.push(Candidate { snippet, context_paragraph_id: t.paragraph_id, context: context.clone(), triple_id: t.triple_id });
        }
    }
    Ok(out)
}
