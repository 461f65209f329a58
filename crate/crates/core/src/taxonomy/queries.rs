use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::forest::TaxonomyForest;
use crate::error::{Error, Result};
use crate::kg::KnowledgeGraph;

/// Subclass relation merged from forest edges and composition edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Taxonomy {
    parents: BTreeMap<String, BTreeSet<String>>,
    children: BTreeMap<String, BTreeSet<String>>,
    known: BTreeSet<String>,
}

impl Taxonomy {
    pub fn new(kg: &KnowledgeGraph, forest: &TaxonomyForest) -> Self {
        let mut t = Taxonomy::default();
        t.known.extend(kg.concepts.keys().cloned());
        for tree in &forest.trees {
            t.known.extend(tree.nodes.iter().map(|n| n.uri.clone()));
        }
        for (sub, sup) in forest.edges().chain(kg.subclass_edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))) {
            t.add_edge(sub, sup);
        }
        t
    }

    fn add_edge(&mut self, sub: &str, sup: &str) {
        if sub == sup {
            return;
        }
        self.known.insert(sub.to_string());
        self.known.insert(sup.to_string());
        self.parents.entry(sub.to_string()).or_default().insert(sup.to_string());
        self.children.entry(sup.to_string()).or_default().insert(sub.to_string());
    }

    pub fn contains(&self, uri: &str) -> bool {
        self.known.contains(uri)
    }

    pub fn uris(&self) -> impl Iterator<Item = &str> {
        self.known.iter().map(String::as_str)
    }

    /// Direct superclasses, sorted.
    pub fn parents_of(&self, uri: &str) -> impl Iterator<Item = &str> {
        self.parents.get(uri).into_iter().flatten().map(String::as_str)
    }

    /// Direct subclasses, sorted.
    pub fn children_of(&self, uri: &str) -> impl Iterator<Item = &str> {
        self.children.get(uri).into_iter().flatten().map(String::as_str)
    }

    fn closure(&self, uri: &str, step: &BTreeMap<String, BTreeSet<String>>) -> Result<Vec<String>> {
        if !self.contains(uri) {
            return Err(Error::MissingConcept(uri.to_string()));
        }
        let mut seen = BTreeSet::from([uri.to_string()]);
        let mut out = Vec::new();
        let mut frontier = VecDeque::from([uri.to_string()]);
        // one breadth-first level at a time, each level sorted
        while !frontier.is_empty() {
            let mut level = BTreeSet::new();
            for u in frontier.drain(..) {
                for v in step.get(&u).into_iter().flatten() {
                    if !seen.contains(v) {
                        level.insert(v.clone());
                    }
                }
            }
            for v in level {
                seen.insert(v.clone());
                out.push(v.clone());
                frontier.push_back(v);
            }
        }
        Ok(out)
    }

    pub fn superclasses(&self, uri: &str) -> Result<Vec<String>> {
        self.closure(uri, &self.parents)
    }

    pub fn subclasses(&self, uri: &str) -> Result<Vec<String>> {
        self.closure(uri, &self.children)
    }

    /// `uri` followed by all its subclasses.
    pub fn subtree(&self, uri: &str) -> Result<Vec<String>> {
        let mut out = vec![uri.to_string()];
        out.extend(self.subclasses(uri)?);
        Ok(out)
    }
}
