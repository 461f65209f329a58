use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::betweenness::CentralityIndex;
use super::frequency::FrequencyTable;
use crate::kg::{KnowledgeGraph, UriMinter};
use crate::nlp::tokenize::tokenize;

/// A concept mention; offsets are characters into the annotated text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Annotation {
    pub start: usize,
    pub end: usize,
    pub concept_uri: String,
}

/// Concept lookup by lemma sequence.
#[derive(Debug, Clone)]
pub struct MentionIndex {
    phrases: HashMap<Vec<String>, String>,
    max_len: usize,
    minter: UriMinter,
}

impl MentionIndex {
    pub fn new(kg: &KnowledgeGraph) -> Self {
        let phrases: HashMap<Vec<String>, String> =
            kg.concepts.values().map(|c| (c.lemma_tokens().map(str::to_string).collect(), c.uri.clone())).collect();
        let max_len = phrases.keys().map(Vec::len).max().unwrap_or(0);
        MentionIndex { phrases, max_len, minter: UriMinter::new(kg.namespace.clone()) }
    }

    /// Longest concept match at each position, scanning left to right and
    /// resuming after each match.
    pub fn find_mentions(&self, text: &str) -> Vec<Annotation> {
        let tokens = tokenize(text);
        let keys: Vec<Option<String>> =
            tokens.iter().map(|t| if t.text.starts_with(['\'', '\u{2019}']) { None } else { self.minter.token_key(&t.text) }).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let run = keys[i..].iter().take(self.max_len).take_while(|k| k.is_some()).count();
            let hit = (1..=run).rev().find_map(|len| {
                let window: Vec<String> = keys[i..i + len].iter().flatten().cloned().collect();
                self.phrases.get(&window).map(|uri| (len, uri))
            });
            match hit {
                Some((len, uri)) => {
                    out.push(Annotation { start: tokens[i].start, end: tokens[i + len - 1].end, concept_uri: uri.clone() });
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }
}

/// Mention matcher plus the two relevance filters: common-knowledge
/// concepts and concepts with zero betweenness are never annotated.
#[derive(Debug, Clone)]
pub struct Annotator {
    index: MentionIndex,
    allowed: BTreeSet<String>,
}

impl Annotator {
    pub fn new(kg: &KnowledgeGraph, centrality: &CentralityIndex, table: &FrequencyTable, rank_cutoff: usize) -> Self {
        let allowed = kg
            .concepts
            .values()
            .filter(|c| centrality.get(&c.uri) > 0.0 && !table.all_common(c.lemma_tokens(), rank_cutoff))
            .map(|c| c.uri.clone())
            .collect();
        Annotator { index: MentionIndex::new(kg), allowed }
    }

    pub fn is_annotatable(&self, uri: &str) -> bool {
        self.allowed.contains(uri)
    }

    /// Filtering happens after longest-match selection: a filtered long match
    /// does not fall back to a shorter one.
    pub fn annotate(&self, text: &str) -> Vec<Annotation> {
        let mut mentions = self.index.find_mentions(text);
        mentions.retain(|a| self.allowed.contains(&a.concept_uri));
        mentions
    }

    pub fn mentions(&self, text: &str) -> Vec<Annotation> {
        self.index.find_mentions(text)
    }
}

pub fn annotate(text: &str, kg: &KnowledgeGraph, centrality: &CentralityIndex, table: &FrequencyTable, rank_cutoff: usize) -> Vec<Annotation> {
    Annotator::new(kg, centrality, table, rank_cutoff).annotate(text)
}

fn escape(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
}

/// Escapes `text` and wraps each annotation in an anchor carrying the
/// concept URI. Annotations must be sorted and non-overlapping.
pub fn to_html(text: &str, annotations: &[Annotation]) -> String {
    let chars: Vec<char> = text.chars().collect();
    let slice = |a: usize, b: usize| chars[a.min(chars.len())..b.min(chars.len())].iter().collect::<String>();
    let mut out = String::with_capacity(text.len() * 2);
    let mut pos = 0;
    for a in annotations {
        if a.start < pos {
            continue;
        }
        escape(&slice(pos, a.start), &mut out);
        out.push_str("<a class=\"es-annotation\" href=\"#\" data-concept-uri=\"");
        escape(&a.concept_uri, &mut out);
        out.push_str("\">");
        escape(&slice(a.start, a.end), &mut out);
        out.push_str("</a>");
        pos = a.end;
    }
    escape(&slice(pos, chars.len()), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotate::compute_betweenness;
    use crate::kg::{build_graph, ingest_corpus, BuildOptions, RawDocument};
    use crate::nlp::tokenize::char_slice;
    use crate::nlp::RuleBasedParser;

    fn graph(text: &str) -> KnowledgeGraph {
        let parser = RuleBasedParser::default();
        let corpus = ingest_corpus(&[RawDocument::new("t", text)], &parser).unwrap();
        build_graph(corpus, &parser, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn longest_match_wins() {
        let kg = graph("the customer opened a new bank account");
        let idx = MentionIndex::new(&kg);
        let text = "Your bank accounts and the account of a customer.";
        let m = idx.find_mentions(text);
        let got: Vec<_> = m.iter().map(|a| (char_slice(text, a.start..a.end), a.concept_uri.as_str())).collect();
        assert_eq!(got, [("bank accounts", "ns:bank_account"), ("account", "ns:account"), ("customer", "ns:customer")]);
    }

    #[test]
    fn filters_drop_common_and_peripheral_concepts() {
        let kg = graph("The lender approved the loan in November. The loan funded the house. The house needs a roof.");
        let c = compute_betweenness(&kg);
        let a = Annotator::new(&kg, &c, FrequencyTable::english(), 1000);
        let text = "In November the lender said the loan covers the house and the roof.";
        let uris: Vec<_> = a.annotate(text).into_iter().map(|a| a.concept_uri).collect();
        // house is common, lender and roof are peripheral, november is both
        assert_eq!(uris, ["ns:loan"]);
        assert!(a.annotate("").is_empty());
        assert!(a.annotate("the day and the time").is_empty());
    }

    #[test]
    fn html_wraps_and_escapes() {
        let anns = [Annotation { start: 4, end: 8, concept_uri: "ns:loan".into() }];
        assert_eq!(to_html("<a> loan & co", &anns), "&lt;a&gt; <a class=\"es-annotation\" href=\"#\" data-concept-uri=\"ns:loan\">loan</a> &amp; co");
    }
}
