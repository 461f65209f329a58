//! Line-delimited JSON for graphs: one record per document, paragraph,
//! sentence, concept, triple and edge, tagged by `kind`.

use std::io::Write;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{Concept, Document, KnowledgeGraph, Paragraph, Sentence, SourceEdge, SourceKey, TemplateTriple};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphRecord {
    Meta { namespace: String },
    Document(Document),
    Paragraph(Paragraph),
    Sentence(Sentence),
    Concept(Concept),
    Triple(TemplateTriple),
    Subclass { sub_uri: String, super_uri: String },
    Source { source: SourceKey, sentence_id: usize },
    Warning { message: String },
}

pub fn write_jsonl<T: Serialize>(items: impl IntoIterator<Item = T>, mut out: impl Write) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, &item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(text: &str, what: &'static str) -> Result<Vec<T>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Format { what, line: i + 1, reason: e.to_string() }))
        .collect()
}

pub fn graph_records(kg: &KnowledgeGraph) -> impl Iterator<Item = GraphRecord> + '_ {
    let c = &kg.corpus;
    std::iter::once(GraphRecord::Meta { namespace: kg.namespace.clone() })
        .chain(c.documents.iter().cloned().map(GraphRecord::Document))
        .chain(c.paragraphs.iter().cloned().map(GraphRecord::Paragraph))
        .chain(c.sentences.iter().cloned().map(GraphRecord::Sentence))
        .chain(kg.concepts.values().cloned().map(GraphRecord::Concept))
        .chain(kg.triples.iter().cloned().map(GraphRecord::Triple))
        .chain(kg.subclass_edges.iter().map(|(a, b)| GraphRecord::Subclass { sub_uri: a.clone(), super_uri: b.clone() }))
        .chain(kg.source_edges.iter().map(|e| GraphRecord::Source { source: e.source.clone(), sentence_id: e.sentence_id }))
        .chain(kg.warnings.iter().map(|w| GraphRecord::Warning { message: w.clone() }))
}

pub fn write_graph(kg: &KnowledgeGraph, out: impl Write) -> std::io::Result<()> {
    write_jsonl(graph_records(kg), out)
}

pub fn read_graph(text: &str) -> Result<KnowledgeGraph> {
    let mut kg = KnowledgeGraph::default();
    for record in read_jsonl::<GraphRecord>(text, "graph record")? {
        match record {
            GraphRecord::Meta { namespace } => kg.namespace = namespace,
            GraphRecord::Document(d) => kg.corpus.documents.push(d),
            GraphRecord::Paragraph(p) => kg.corpus.paragraphs.push(p),
            GraphRecord::Sentence(s) => kg.corpus.sentences.push(s),
            GraphRecord::Concept(c) => {
                kg.concepts.insert(c.uri.clone(), c);
            }
            GraphRecord::Triple(t) => kg.triples.push(t),
            GraphRecord::Subclass { sub_uri, super_uri } => {
                kg.subclass_edges.insert((sub_uri, super_uri));
            }
            GraphRecord::Source { source, sentence_id } => {
                kg.source_edges.insert(SourceEdge { source, sentence_id });
            }
            GraphRecord::Warning { message } => kg.warnings.push(message),
        }
    }
    Ok(kg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{build_graph, ingest_corpus, BuildOptions, RawDocument};
    use crate::nlp::RuleBasedParser;

    #[test]
    fn graph_round_trips_through_jsonl() {
        let parser = RuleBasedParser::default();
        let corpus = ingest_corpus(&[RawDocument::new("t", "the customer opened a new bank account. Banks charge fees.")], &parser).unwrap();
        let kg = build_graph(corpus, &parser, &BuildOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_graph(&kg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().next().unwrap().contains("\"kind\":\"meta\""));
        assert_eq!(read_graph(&text).unwrap(), kg);
    }

    #[test]
    fn malformed_line_reports_position() {
        let err = read_graph("{\"kind\":\"meta\",\"namespace\":\"ns:\"}\n{oops").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
    }
}
