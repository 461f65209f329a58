use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::align::Alignment;
use super::fca::{ConceptLattice, FormalContext};
use crate::kg::KnowledgeGraph;
use crate::nlp::SenseDisambiguator;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// Abstract class derived from the lattice.
    #[default]
    Class,
    /// Knowledge-graph concept.
    Concept,
    /// A concept that is also the class of its own lattice node.
    Merged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestNode {
    pub uri: String,
    pub label: String,
    pub sense_id: Option<String>,
    pub parent: Option<String>,
    pub kind: NodeKind,
}

/// Nodes in breadth-first order from the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyTree {
    pub root_uri: String,
    pub root_label: String,
    pub nodes: Vec<ForestNode>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyForest {
    pub trees: Vec<TaxonomyTree>,
}

/// Exported edge; the root of each tree has no parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestRecord {
    pub child_uri: String,
    pub parent_uri: Option<String>,
    pub tree_root_label: String,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub sense_id: Option<String>,
    #[serde(default)]
    pub kind: NodeKind,
}

impl TaxonomyForest {
    pub fn records(&self) -> Vec<ForestRecord> {
        self.trees
            .iter()
            .flat_map(|t| {
                t.nodes.iter().map(|n| ForestRecord {
                    child_uri: n.uri.clone(),
                    parent_uri: n.parent.clone(),
                    tree_root_label: t.root_label.clone(),
                    label: n.label.clone(),
                    sense_id: n.sense_id.clone(),
                    kind: n.kind,
                })
            })
            .collect()
    }

    /// Rebuilds trees from exported records; missing labels fall back to the URI.
    pub fn from_records(records: &[ForestRecord]) -> Self {
        let mut trees: Vec<TaxonomyTree> = Vec::new();
        for r in records {
            if r.parent_uri.is_none() {
                trees.push(TaxonomyTree { root_uri: r.child_uri.clone(), root_label: r.tree_root_label.clone(), nodes: Vec::new() });
            }
            if let Some(tree) = trees.last_mut() {
                tree.nodes.push(ForestNode {
                    uri: r.child_uri.clone(),
                    label: if r.label.is_empty() { r.child_uri.clone() } else { r.label.clone() },
                    sense_id: r.sense_id.clone(),
                    parent: r.parent_uri.clone(),
                    kind: r.kind,
                });
            }
        }
        TaxonomyForest { trees }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.trees.iter().flat_map(|t| t.nodes.iter()).filter_map(|n| n.parent.as_deref().map(|p| (n.uri.as_str(), p)))
    }

    pub fn tree_of(&self, uri: &str) -> Option<&TaxonomyTree> {
        self.trees.iter().find(|t| t.nodes.iter().any(|n| n.uri == uri))
    }

    pub fn node_count(&self) -> usize {
        self.trees.iter().map(|t| t.nodes.len()).sum()
    }
}

fn fallback_lemma(sense_id: &str) -> String {
    sense_id.split('.').next().unwrap_or(sense_id).replace('_', " ")
}

/// Builds the forest from the lattice.
///
/// A lattice node becomes a class when it introduces attributes; its label
/// is the lemma of the most abstract one. Its parent is the class reached by
/// repeatedly taking the upper cover with the smallest extent (ties by
/// label). Trees are rooted at the top when its intent is non-empty and at
/// the coatoms otherwise. Each aligned concept hangs below the class of its
/// object concept, or merges with it when their URIs coincide.
pub fn extract_forest(
    lattice: &ConceptLattice,
    ctx: &FormalContext,
    alignment: &Alignment,
    wsd: &dyn SenseDisambiguator,
    kg: &KnowledgeGraph,
) -> TaxonomyForest {
    if lattice.is_empty() || ctx.objects.is_empty() {
        return TaxonomyForest::default();
    }
    // distance of each attribute from the abstract end of its chains
    let mut level: HashMap<&str, usize> = HashMap::new();
    for entry in alignment.senses.values() {
        let chain: Vec<&str> = entry.chain().filter(|a| ctx.attributes.iter().any(|x| x == a)).collect();
        for (i, a) in chain.iter().enumerate() {
            let d = chain.len() - 1 - i;
            level.entry(a).and_modify(|l| *l = (*l).min(d)).or_insert(d);
        }
    }
    let lemma = |attr: usize| {
        let id = &ctx.attributes[attr];
        wsd.sense_lemma(id).unwrap_or_else(|| fallback_lemma(id))
    };

    let n = lattice.len();
    let upper: Vec<Vec<usize>> = (0..n).map(|i| lattice.upper_covers(i).collect()).collect();
    let mut introduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        if lattice.nodes[i].extent.is_empty() {
            continue;
        }
        let inherited: BTreeSet<usize> = upper[i].iter().flat_map(|&u| lattice.nodes[u].intent.iter().copied()).collect();
        introduced[i] = lattice.nodes[i].intent.iter().copied().filter(|a| !inherited.contains(a)).collect();
    }
    let label_attr: Vec<Option<usize>> = introduced
        .iter()
        .map(|attrs| {
            attrs.iter().copied().min_by(|&a, &b| {
                let la = level.get(ctx.attributes[a].as_str()).copied().unwrap_or(usize::MAX);
                let lb = level.get(ctx.attributes[b].as_str()).copied().unwrap_or(usize::MAX);
                la.cmp(&lb).then_with(|| lemma(a).cmp(&lemma(b))).then_with(|| a.cmp(&b))
            })
        })
        .collect();
    let labels: Vec<String> = label_attr.iter().map(|a| a.map(&lemma).unwrap_or_default()).collect();

    let top = lattice.top;
    let roots: Vec<usize> = if !lattice.nodes[top].intent.is_empty() {
        vec![top]
    } else {
        (0..n).filter(|&i| upper[i] == [top] && !lattice.nodes[i].extent.is_empty()).collect()
    };
    let is_class = |i: usize| roots.contains(&i) || label_attr[i].is_some();
    let lattice_parent = |i: usize| {
        upper[i].iter().copied().min_by(|&a, &b| {
            lattice.nodes[a].extent.len().cmp(&lattice.nodes[b].extent.len()).then_with(|| labels[a].cmp(&labels[b])).then_with(|| a.cmp(&b))
        })
    };
    let class_parent = |i: usize| -> Option<usize> {
        if roots.contains(&i) {
            return None;
        }
        let mut cur = lattice_parent(i)?;
        while !is_class(cur) {
            cur = lattice_parent(cur)?;
        }
        Some(cur)
    };
    let nearest_class = |mut i: usize| -> Option<usize> {
        while !is_class(i) {
            i = lattice_parent(i)?;
        }
        Some(i)
    };

    // object concept of each aligned URI: the node whose intent is the object's row
    let by_intent: HashMap<&[usize], usize> = (0..n).map(|i| (lattice.nodes[i].intent.as_slice(), i)).collect();
    let mut attached: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    let mut home: HashMap<&str, usize> = HashMap::new();
    for (g, uri) in ctx.objects.iter().enumerate() {
        let row: Vec<usize> = ctx.row(g).ones().collect();
        if let Some(class) = by_intent.get(row.as_slice()).and_then(|&i| nearest_class(i)) {
            attached.entry(class).or_default().push(uri);
            home.insert(uri, class);
        }
    }

    // class URIs: namespace + lemma unless taken, else namespace + sense id
    let ns = &kg.namespace;
    let mut uri_of: Vec<Option<String>> = vec![None; n];
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut merged: BTreeSet<usize> = BTreeSet::new();
    for i in (0..n).filter(|&i| is_class(i)) {
        let desired = format!("{ns}{}", labels[i].to_lowercase().replace(' ', "_"));
        let concept_elsewhere = (kg.contains(&desired) || home.contains_key(desired.as_str())) && home.get(desired.as_str()) != Some(&i);
        let uri = if !labels[i].is_empty() && !taken.contains(&desired) && !concept_elsewhere {
            if home.get(desired.as_str()) == Some(&i) {
                merged.insert(i);
            }
            desired
        } else {
            let sense = label_attr[i].map_or_else(|| format!("node{i}"), |a| ctx.attributes[a].clone());
            format!("{ns}{sense}")
        };
        taken.insert(uri.clone());
        uri_of[i] = Some(uri);
    }

    let mut trees = Vec::new();
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in (0..n).filter(|&i| is_class(i)) {
        if let Some(p) = class_parent(i) {
            children.entry(p).or_default().push(i);
        }
    }
    for &root in &roots {
        let mut nodes = Vec::new();
        let root_uri = uri_of[root].clone().unwrap_or_default();
        let mut queue = std::collections::VecDeque::from([(root, None::<String>)]);
        while let Some((i, parent)) = queue.pop_front() {
            let uri = uri_of[i].clone().unwrap_or_default();
            nodes.push(ForestNode {
                uri: uri.clone(),
                label: labels[i].clone(),
                sense_id: label_attr[i].map(|a| ctx.attributes[a].clone()),
                parent,
                kind: if merged.contains(&i) { NodeKind::Merged } else { NodeKind::Class },
            });
            // concepts and subclasses, lexicographic by URI
            let mut next: Vec<(String, Option<usize>)> = Vec::new();
            for &c in attached.get(&i).into_iter().flatten() {
                if c != uri {
                    next.push((c.to_string(), None));
                }
            }
            for &c in children.get(&i).into_iter().flatten() {
                next.push((uri_of[c].clone().unwrap_or_default(), Some(c)));
            }
            next.sort();
            for (child_uri, class) in next {
                match class {
                    Some(c) => queue.push_back((c, Some(uri.clone()))),
                    None => {
                        let concept = kg.concept(&child_uri);
                        nodes.push(ForestNode {
                            label: concept.map_or_else(|| child_uri.clone(), |c| c.label.clone()),
                            sense_id: alignment.senses.get(&child_uri).map(|e| e.sense_id.clone()),
                            uri: child_uri,
                            parent: Some(uri.clone()),
                            kind: NodeKind::Concept,
                        });
                    }
                }
            }
        }
        // keep breadth-first order stable: concepts were pushed eagerly
        trees.push(TaxonomyTree { root_uri, root_label: labels[root].clone(), nodes });
    }
    trees.sort_by(|a, b| a.root_label.cmp(&b.root_label).then_with(|| a.root_uri.cmp(&b.root_uri)));
    TaxonomyForest { trees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::SenseEntry;
    use crate::taxonomy::{build_formal_context, fca_lattice};

    struct Lemmas;
    impl SenseDisambiguator for Lemmas {
        fn disambiguate(&self, _: &str, _: &str) -> Option<SenseEntry> {
            None
        }
        fn sense_lemma(&self, id: &str) -> Option<String> {
            Some(fallback_lemma(id))
        }
    }

    fn alignment(items: &[(&str, &[&str])]) -> Alignment {
        let mut a = Alignment::default();
        for (uri, chain) in items {
            a.senses.insert(
                uri.to_string(),
                SenseEntry {
                    sense_id: chain[0].into(),
                    lemma: fallback_lemma(chain[0]),
                    hypernyms: chain[1..].iter().map(|s| s.to_string()).collect(),
                },
            );
        }
        a
    }

    fn forest(a: &Alignment) -> TaxonomyForest {
        let ctx = build_formal_context(a, &[]).unwrap();
        let lattice = fca_lattice(&ctx, 100).unwrap();
        let mut kg = KnowledgeGraph { namespace: "ns:".into(), ..Default::default() };
        for uri in a.senses.keys() {
            kg.concepts.insert(
                uri.clone(),
                crate::kg::Concept {
                    uri: uri.clone(),
                    label: uri.trim_start_matches("ns:").into(),
                    lemma: uri.trim_start_matches("ns:").into(),
                    nominal: vec![true],
                    occurrences: vec![],
                },
            );
        }
        extract_forest(&lattice, &ctx, a, &Lemmas, &kg)
    }

    #[test]
    fn dog_and_cat_share_one_tree() {
        let a = alignment(&[
            ("ns:dog", &["dog.n.01", "canine.n.01", "mammal.n.01", "animal.n.01"]),
            ("ns:cat", &["cat.n.01", "feline.n.01", "mammal.n.01", "animal.n.01"]),
        ]);
        let f = forest(&a);
        assert_eq!(f.trees.len(), 1);
        assert_eq!(f.trees[0].root_label, "animal");
        let edges: BTreeSet<(&str, &str)> = f.edges().collect();
        assert_eq!(edges, BTreeSet::from([("ns:canine", "ns:animal"), ("ns:feline", "ns:animal"), ("ns:dog", "ns:canine"), ("ns:cat", "ns:feline")]));
    }

    #[test]
    fn single_object_single_tree() {
        let a = alignment(&[("ns:bank", &["bank.n.01", "slope.n.01", "entity.n.01"])]);
        let f = forest(&a);
        assert_eq!(f.trees.len(), 1);
        assert_eq!(f.trees[0].root_label, "entity");
        assert_eq!(f.trees[0].nodes.len(), 2);
        assert_eq!(f.trees[0].nodes[1].uri, "ns:bank");
    }

    #[test]
    fn disjoint_chains_give_two_trees() {
        let a = alignment(&[("ns:x", &["x.n.01", "p.n.01"]), ("ns:y", &["y.n.01", "q.n.01"])]);
        let f = forest(&a);
        let labels: Vec<_> = f.trees.iter().map(|t| t.root_label.as_str()).collect();
        assert_eq!(labels, ["p", "q"]);
    }

    #[test]
    fn concept_named_like_its_class_merges() {
        let a = alignment(&[("ns:animal", &["animal.n.01"]), ("ns:dog", &["dog.n.01", "animal.n.01"])]);
        let f = forest(&a);
        let t = &f.trees[0];
        assert_eq!(t.root_uri, "ns:animal");
        assert_eq!(t.nodes[0].kind, NodeKind::Merged);
        assert_eq!(t.nodes.iter().filter(|n| n.uri == "ns:animal").count(), 1);
    }

    #[test]
    fn every_aligned_concept_in_exactly_one_tree() {
        let a = alignment(&[
            ("ns:a", &["a.n.01", "m.n.01", "r.n.01"]),
            ("ns:b", &["b.n.01", "m.n.01", "r.n.01"]),
            ("ns:c", &["c.n.01", "s.n.01"]),
            ("ns:d", &["a.n.01", "m.n.01", "r.n.01"]),
        ]);
        let f = forest(&a);
        for uri in a.senses.keys() {
            let count: usize = f.trees.iter().map(|t| t.nodes.iter().filter(|n| &n.uri == uri).count()).sum();
            assert_eq!(count, 1, "{uri}");
        }
        let records = f.records();
        assert_eq!(TaxonomyForest::from_records(&records), f);
    }
}
