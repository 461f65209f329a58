use rayon::prelude::*;

use super::extract::{extract_syntagms, extract_template_triples, Syntagm, TripleDraft};
use super::uri::UriMinter;
use super::{Concept, DocumentCorpus, KnowledgeGraph, Occurrence, SourceEdge, SourceKey, TemplateTriple, OBJ, SUBJ};
use crate::error::{Error, Result};
use crate::nlp::tokenize::char_slice;
use crate::nlp::{DependencyParser, ParsedToken};

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub minter: UriMinter,
    /// Extract sentences on the rayon pool.
    pub parallel: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { minter: UriMinter::default(), parallel: true }
    }
}

type SentenceOutput = Result<(Vec<ParsedToken>, Vec<Syntagm>, Vec<TripleDraft>)>;

fn extract_sentence(parser: &dyn DependencyParser, minter: &UriMinter, text: &str) -> SentenceOutput {
    let tokens = parser.parse_sentence(text)?;
    let syntagms = extract_syntagms(&tokens, minter);
    let drafts = extract_template_triples(&tokens, &syntagms);
    Ok((tokens, syntagms, drafts))
}

/// Extracts every sentence and merges the results in sentence order.
/// Sentences that fail to parse are recorded as warnings.
pub fn build_graph(corpus: DocumentCorpus, parser: &dyn DependencyParser, options: &BuildOptions) -> Result<KnowledgeGraph> {
    if corpus.sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let minter = &options.minter;
    let outputs: Vec<SentenceOutput> = if options.parallel {
        corpus.sentences.par_iter().map(|s| extract_sentence(parser, minter, &s.text)).collect()
    } else {
        corpus.sentences.iter().map(|s| extract_sentence(parser, minter, &s.text)).collect()
    };

    let mut kg = KnowledgeGraph { namespace: minter.namespace().to_string(), ..KnowledgeGraph::default() };
    for (sentence, output) in corpus.sentences.iter().zip(outputs) {
        let sid = sentence.sentence_id;
        let (tokens, syntagms, drafts) = match output {
            Ok(o) => o,
            Err(e) => {
                kg.warnings.push(format!("sentence {sid}: {e}"));
                continue;
            }
        };
        for s in &syntagms {
            let concept = kg.concepts.entry(s.uri.clone()).or_insert_with(|| Concept {
                uri: s.uri.clone(),
                label: s.label.clone(),
                lemma: s.lemma.clone(),
                nominal: s.nominal.clone(),
                occurrences: Vec::new(),
            });
            concept.occurrences.push(Occurrence {
                sentence_id: sid,
                start: s.start,
                end: s.end,
                parts: s.content.clone().map(|k| [tokens[k].start, tokens[k].end]).collect(),
            });
            kg.source_edges.insert(SourceEdge { source: SourceKey::Concept(s.uri.clone()), sentence_id: sid });
        }
        for d in drafts {
            let triple_id = kg.triples.len();
            kg.triples.push(TemplateTriple {
                triple_id,
                subject_uri: syntagms[d.subject].uri.clone(),
                template: d.template,
                object_uri: syntagms[d.object].uri.clone(),
                subject_surface: syntagms[d.subject].surface.clone(),
                object_surface: syntagms[d.object].surface.clone(),
                sentence_id: sid,
                paragraph_id: sentence.paragraph_id,
            });
            kg.source_edges.insert(SourceEdge { source: SourceKey::Triple(triple_id), sentence_id: sid });
        }
    }
    kg.corpus = corpus;
    Ok(add_composition_subclasses(kg))
}

/// Links every multi-token concept to each of its nominal constituents,
/// creating constituent concepts from the composite's mentions if needed.
pub fn add_composition_subclasses(mut kg: KnowledgeGraph) -> KnowledgeGraph {
    let composites: Vec<String> = kg.concepts.values().filter(|c| c.is_composite()).map(|c| c.uri.clone()).collect();
    for uri in composites {
        let composite = kg.concepts[&uri].clone();
        for (k, key) in composite.lemma_tokens().enumerate() {
            if !composite.nominal.get(k).copied().unwrap_or(false) {
                continue;
            }
            let part_uri = format!("{}{}", kg.namespace, key);
            if part_uri == uri {
                continue;
            }
            if !kg.concepts.contains_key(&part_uri) {
                let occurrences: Vec<Occurrence> = composite
                    .occurrences
                    .iter()
                    .filter_map(|o| {
                        let [start, end] = *o.parts.get(k)?;
                        Some(Occurrence { sentence_id: o.sentence_id, start, end, parts: vec![[start, end]] })
                    })
                    .collect();
                let label = occurrences
                    .first()
                    .and_then(|o| kg.corpus.sentence(o.sentence_id).map(|s| char_slice(&s.text, o.start..o.end).to_string()))
                    .unwrap_or_else(|| key.to_string());
                for o in &occurrences {
                    kg.source_edges.insert(SourceEdge { source: SourceKey::Concept(part_uri.clone()), sentence_id: o.sentence_id });
                }
                kg.concepts
                    .insert(part_uri.clone(), Concept { uri: part_uri.clone(), label, lemma: key.to_string(), nominal: vec![true], occurrences });
            }
            kg.subclass_edges.insert((uri.clone(), part_uri));
        }
    }
    kg
}

/// Substitutes the triple's subject and object phrases into its template.
pub fn realize_triple(t: &TemplateTriple, kg: &KnowledgeGraph) -> Result<String> {
    for uri in [&t.subject_uri, &t.object_uri] {
        if !kg.contains(uri) {
            return Err(Error::MissingConcept(uri.clone()));
        }
    }
    Ok(t.template.replace(SUBJ, &t.subject_surface).replace(OBJ, &t.object_surface))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{ingest_corpus, RawDocument};
    use crate::nlp::RuleBasedParser;

    fn graph(text: &str) -> KnowledgeGraph {
        let parser = RuleBasedParser::default();
        let corpus = ingest_corpus(&[RawDocument::new("t", text)], &parser).unwrap();
        build_graph(corpus, &parser, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn customer_example_concepts_and_edges() {
        let kg = graph("the customer opened a new bank account");
        let uris: Vec<_> = kg.concepts.keys().map(String::as_str).collect();
        assert_eq!(uris, ["ns:account", "ns:bank", "ns:bank_account", "ns:customer"]);
        let edges: Vec<_> = kg.subclass_edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(edges, [("ns:bank_account", "ns:account"), ("ns:bank_account", "ns:bank")]);
        assert_eq!(kg.concepts["ns:bank"].label, "bank");
        let t = &kg.triples[0];
        assert_eq!((t.subject_uri.as_str(), t.template.as_str(), t.object_uri.as_str()), ("ns:customer", "{subj} opened {obj}", "ns:bank_account"));
        assert_eq!(realize_triple(t, &kg).unwrap(), "the customer opened a new bank account");
    }

    #[test]
    fn adjectives_are_not_composition_targets() {
        let kg = graph("A hard credit inquiry lowers your score.");
        let supers: Vec<_> = kg.composition_supers("ns:hard_credit_inquiry").collect();
        assert_eq!(supers, ["ns:credit", "ns:inquiry"]);
        assert!(!kg.contains("ns:hard"));
    }

    #[test]
    fn unknown_uri_in_realization() {
        let kg = graph("the customer opened a new bank account");
        let mut t = kg.triples[0].clone();
        t.object_uri = "ns:nothing".into();
        assert!(matches!(realize_triple(&t, &kg), Err(Error::MissingConcept(u)) if u == "ns:nothing"));
    }

    #[test]
    fn every_concept_and_triple_has_a_source() {
        let kg = graph("The lender checks your credit report. A late payment hurts your credit score.");
        for uri in kg.concepts.keys() {
            assert!(kg.source_edges.iter().any(|e| e.source == SourceKey::Concept(uri.clone())), "{uri}");
        }
        for t in &kg.triples {
            let e = SourceEdge { source: SourceKey::Triple(t.triple_id), sentence_id: t.sentence_id };
            assert!(kg.source_edges.contains(&e));
        }
    }

    #[test]
    fn sequential_and_parallel_builds_agree() {
        let parser = RuleBasedParser::default();
        let text = "The lender checks your credit report. A late payment hurts your credit score.\n\nBanks issue cards.";
        let corpus = ingest_corpus(&[RawDocument::new("t", text)], &parser).unwrap();
        let seq = BuildOptions { parallel: false, ..BuildOptions::default() };
        let a = build_graph(corpus.clone(), &parser, &seq).unwrap();
        let b = build_graph(corpus, &parser, &BuildOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
