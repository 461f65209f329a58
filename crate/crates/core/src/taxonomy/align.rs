use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::fca::FormalContext;
use crate::error::{Error, Result};
use crate::kg::KnowledgeGraph;
use crate::nlp::{SenseDisambiguator, SenseEntry};

/// Sense of each aligned concept; concepts without a sense are listed in `misses`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    pub senses: BTreeMap<String, SenseEntry>,
    pub misses: Vec<String>,
}

impl Alignment {
    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }
}

/// Disambiguates each concept's lemma against the sentence of its first mention.
pub fn align_concepts(kg: &KnowledgeGraph, wsd: &dyn SenseDisambiguator) -> Alignment {
    let mut alignment = Alignment::default();
    for (uri, concept) in &kg.concepts {
        let context = concept.occurrences.first().and_then(|o| kg.corpus.sentence(o.sentence_id)).map_or("", |s| s.text.as_str());
        match wsd.disambiguate(&concept.lemma, context) {
            Some(entry) => {
                alignment.senses.insert(uri.clone(), entry);
            }
            None => alignment.misses.push(uri.clone()),
        }
    }
    alignment
}

/// Objects are aligned URIs; attributes are every sense on their hypernym
/// chains (the own sense included) except `excluded`.
pub fn build_formal_context(alignment: &Alignment, excluded: &[String]) -> Result<FormalContext> {
    if alignment.senses.is_empty() {
        return Err(Error::EmptyContext);
    }
    let skip: BTreeSet<&str> = excluded.iter().map(String::as_str).collect();
    let attributes: Vec<String> = alignment
        .senses
        .values()
        .flat_map(|e| e.chain())
        .filter(|a| !skip.contains(a))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_string)
        .collect();
    let position: BTreeMap<&str, usize> = attributes.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let incidence: Vec<Vec<usize>> = alignment.senses.values().map(|e| e.chain().filter_map(|a| position.get(a).copied()).collect()).collect();
    FormalContext::new(alignment.senses.keys().cloned().collect(), attributes, &incidence)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::kg::{build_graph, ingest_corpus, BuildOptions, RawDocument};
    use crate::nlp::{LexicalKnowledgeBase, MostFrequentSense, RuleBasedParser};

    fn entry(sense: &str, chain: &[&str]) -> SenseEntry {
        SenseEntry {
            sense_id: sense.into(),
            lemma: sense.split('.').next().unwrap().into(),
            hypernyms: chain.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn dog_cat_context() {
        let mut a = Alignment::default();
        a.senses.insert("ns:dog".into(), entry("dog.n.01", &["canine.n.01", "mammal.n.01", "animal.n.01"]));
        a.senses.insert("ns:cat".into(), entry("cat.n.01", &["feline.n.01", "mammal.n.01", "animal.n.01"]));
        let ctx = build_formal_context(&a, &[]).unwrap();
        assert_eq!(ctx.objects, ["ns:cat", "ns:dog"]);
        let mammal = ctx.attributes.iter().position(|x| x == "mammal.n.01").unwrap();
        assert!(ctx.attributes.contains(&"animal.n.01".to_string()));
        assert!(ctx.incident(0, mammal) && ctx.incident(1, mammal));
        let dog = ctx.attributes.iter().position(|x| x == "dog.n.01").unwrap();
        assert!(ctx.incident(1, dog) && !ctx.incident(0, dog));
    }

    #[test]
    fn identical_chains_give_identical_rows() {
        let mut a = Alignment::default();
        a.senses.insert("ns:a".into(), entry("x.n.01", &["y.n.01"]));
        a.senses.insert("ns:b".into(), entry("x.n.01", &["y.n.01"]));
        let ctx = build_formal_context(&a, &[]).unwrap();
        assert_eq!(ctx.row(0), ctx.row(1));
    }

    #[test]
    fn excluded_attributes_are_dropped() {
        let mut a = Alignment::default();
        a.senses.insert("ns:a".into(), entry("x.n.01", &["entity.n.01"]));
        let ctx = build_formal_context(&a, &["entity.n.01".into()]).unwrap();
        assert_eq!(ctx.attributes, ["x.n.01"]);
    }

    #[test]
    fn empty_alignment_is_an_error() {
        assert!(matches!(build_formal_context(&Alignment::default(), &[]), Err(Error::EmptyContext)));
        let kg = KnowledgeGraph::default();
        assert!(align_concepts(&kg, &MostFrequentSense::english()).is_empty());
    }

    #[test]
    fn graph_alignment_records_misses() {
        let parser = RuleBasedParser::default();
        let corpus = ingest_corpus(&[RawDocument::new("t", "The qwzx opened a new bank account.")], &parser).unwrap();
        let kg = build_graph(corpus, &parser, &BuildOptions::default()).unwrap();
        let kb = LexicalKnowledgeBase::english();
        let a = align_concepts(&kg, &MostFrequentSense::new(Arc::clone(&kb)));
        assert_eq!(a.misses, ["ns:qwzx"]);
        assert_eq!(a.senses["ns:bank_account"].sense_id, "bank_account.n.01");
        assert_eq!(a.senses["ns:bank_account"].hypernyms.last().map(String::as_str), Some("entity.n.01"));
    }
}
