//! Formal contexts and their concept lattices.
//!
//! Concepts are enumerated depth-first in lectic order of intents (the
//! Close-by-One form of NextClosure): a candidate `B ∪ {j}` is kept only if
//! its closure adds no attribute smaller than `j` that `B` lacks, so every
//! closed intent is generated exactly once.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_OBJECT_LIMIT: usize = 5_000;

/// Objects × attributes incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    rows: Vec<FixedBitSet>,
    columns: Vec<FixedBitSet>,
}

impl FormalContext {
    /// `incidence[g]` lists the attribute indices of object `g`.
    pub fn new(objects: Vec<String>, attributes: Vec<String>, incidence: &[Vec<usize>]) -> Result<Self> {
        let unique = |v: &[String]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
        if !unique(&objects) || !unique(&attributes) {
            return Err(Error::Config("formal context has duplicate objects or attributes".into()));
        }
        if incidence.len() != objects.len() {
            return Err(Error::Config("incidence rows do not match objects".into()));
        }
        let m = attributes.len();
        let mut rows = vec![FixedBitSet::with_capacity(m); objects.len()];
        let mut columns = vec![FixedBitSet::with_capacity(objects.len()); m];
        for (g, attrs) in incidence.iter().enumerate() {
            for &a in attrs {
                if a >= m {
                    return Err(Error::Config(format!("attribute index {a} out of range")));
                }
                rows[g].insert(a);
                columns[a].insert(g);
            }
        }
        Ok(FormalContext { objects, attributes, rows, columns })
    }

    pub fn incident(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    pub fn row(&self, object: usize) -> &FixedBitSet {
        &self.rows[object]
    }

    pub fn column(&self, attribute: usize) -> &FixedBitSet {
        &self.columns[attribute]
    }

    /// Attributes shared by every object of `extent`.
    pub fn intent_of(&self, extent: &FixedBitSet) -> FixedBitSet {
        let mut intent = FixedBitSet::with_capacity(self.attributes.len());
        intent.insert_range(..);
        for g in extent.ones() {
            intent.intersect_with(&self.rows[g]);
        }
        intent
    }

    /// Objects having every attribute of `intent`.
    pub fn extent_of(&self, intent: &FixedBitSet) -> FixedBitSet {
        let mut extent = FixedBitSet::with_capacity(self.objects.len());
        extent.insert_range(..);
        for m in intent.ones() {
            extent.intersect_with(&self.columns[m]);
        }
        extent
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormalConcept {
    /// Sorted object indices.
    pub extent: Vec<usize>,
    /// Sorted attribute indices.
    pub intent: Vec<usize>,
}

/// All formal concepts, ordered by descending extent size then extent, with
/// the covering relation as `(lower, upper)` node-index pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptLattice {
    pub nodes: Vec<FormalConcept>,
    pub covers: BTreeSet<(usize, usize)>,
    pub top: usize,
    pub bottom: usize,
}

impl ConceptLattice {
    pub fn upper_covers(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.range((node, 0)..=(node, usize::MAX)).map(|&(_, u)| u)
    }

    pub fn lower_covers(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |&&(_, u)| u == node).map(|&(l, _)| l)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn to_vec(set: &FixedBitSet) -> Vec<usize> {
    set.ones().collect()
}

/// Depth-first lectic enumeration of closed (extent, intent) pairs.
fn enumerate(ctx: &FormalContext) -> Vec<(FixedBitSet, FixedBitSet)> {
    let g = ctx.objects.len();
    let m = ctx.attributes.len();
    let mut all = FixedBitSet::with_capacity(g);
    all.insert_range(..);
    let top_intent = ctx.intent_of(&all);
    let mut out = Vec::new();
    let mut stack = vec![(all, top_intent, 0usize)];
    while let Some((extent, intent, from)) = stack.pop() {
        let mut children = Vec::new();
        for j in from..m {
            if intent.contains(j) {
                continue;
            }
            let mut child_extent = extent.clone();
            child_extent.intersect_with(ctx.column(j));
            let child_intent = if child_extent.is_clear() {
                let mut full = FixedBitSet::with_capacity(m);
                full.insert_range(..);
                full
            } else {
                ctx.intent_of(&child_extent)
            };
            // canonicity: no new attribute below j
            let canonical = (0..j).all(|k| child_intent.contains(k) == intent.contains(k));
            if canonical {
                children.push((child_extent, child_intent, j + 1));
            }
        }
        out.push((extent, intent));
        // reverse so the smallest j is explored first
        stack.extend(children.into_iter().rev());
    }
    out
}

/// The complete concept lattice. Contexts with more than `object_limit`
/// objects are refused.
pub fn fca_lattice(ctx: &FormalContext, object_limit: usize) -> Result<ConceptLattice> {
    if ctx.objects.len() > object_limit {
        return Err(Error::SizeLimit { objects: ctx.objects.len(), limit: object_limit });
    }
    let mut pairs = enumerate(ctx);
    pairs.sort_by(|a, b| b.0.count_ones(..).cmp(&a.0.count_ones(..)).then_with(|| to_vec(&a.0).cmp(&to_vec(&b.0))));
    let index: HashMap<FixedBitSet, usize> = pairs.iter().enumerate().map(|(i, (e, _))| (e.clone(), i)).collect();

    // lower covers of (A, B): the maximal sets among A ∩ m' for m ∉ B
    let covers: Vec<(usize, usize)> = pairs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(upper, (extent, intent))| {
            let mut candidates: Vec<FixedBitSet> = Vec::new();
            for m in 0..ctx.attributes.len() {
                if intent.contains(m) {
                    continue;
                }
                let mut c = extent.clone();
                c.intersect_with(ctx.column(m));
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
            let maximal: Vec<usize> = candidates.iter().filter(|c| !candidates.iter().any(|d| d != *c && c.is_subset(d))).map(|c| index[c]).collect();
            maximal.into_iter().map(move |lower| (lower, upper))
        })
        .collect();

    let nodes: Vec<FormalConcept> = pairs.iter().map(|(e, i)| FormalConcept { extent: to_vec(e), intent: to_vec(i) }).collect();
    let bottom = nodes.len() - 1;
    Ok(ConceptLattice { nodes, covers: covers.into_iter().collect(), top: 0, bottom })
}

#[cfg(test)]
pub(crate) mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    pub(crate) type LatticeSets = (BTreeSet<FormalConcept>, BTreeSet<(Vec<usize>, Vec<usize>)>);

    /// Closed pairs by scanning every subset of objects.
    pub(crate) fn brute_force(ctx: &FormalContext) -> LatticeSets {
        let g = ctx.objects.len();
        let m = ctx.attributes.len();
        let mut closed = BTreeSet::new();
        for mask in 0u32..(1 << g) {
            let extent: Vec<usize> = (0..g).filter(|i| mask & (1 << i) != 0).collect();
            let intent: Vec<usize> = (0..m).filter(|&a| extent.iter().all(|&o| ctx.incident(o, a))).collect();
            let back: Vec<usize> = (0..g).filter(|&o| intent.iter().all(|&a| ctx.incident(o, a))).collect();
            if back == extent {
                closed.insert(FormalConcept { extent, intent });
            }
        }
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
        let mut edges = BTreeSet::new();
        for lo in &closed {
            for hi in &closed {
                if lo == hi || !subset(&lo.extent, &hi.extent) {
                    continue;
                }
                let between = closed.iter().any(|mid| mid != lo && mid != hi && subset(&lo.extent, &mid.extent) && subset(&mid.extent, &hi.extent));
                if !between {
                    edges.insert((lo.extent.clone(), hi.extent.clone()));
                }
            }
        }
        (closed, edges)
    }

    pub(crate) fn random_context(rng: &mut ChaCha8Rng, max_g: usize, max_m: usize) -> FormalContext {
        let g = rng.random_range(1..=max_g);
        let m = rng.random_range(1..=max_m);
        let density: f64 = rng.random_range(0.1..0.7);
        let incidence: Vec<Vec<usize>> = (0..g).map(|_| (0..m).filter(|_| rng.random_bool(density)).collect()).collect();
        FormalContext::new((0..g).map(|i| format!("g{i}")).collect(), (0..m).map(|i| format!("m{i}")).collect(), &incidence).unwrap()
    }

    pub(crate) fn lattice_sets(l: &ConceptLattice) -> LatticeSets {
        let nodes = l.nodes.iter().cloned().collect();
        let edges = l.covers.iter().map(|&(lo, hi)| (l.nodes[lo].extent.clone(), l.nodes[hi].extent.clone())).collect();
        (nodes, edges)
    }

    fn ctx(g: usize, m: usize, incidence: &[Vec<usize>]) -> FormalContext {
        FormalContext::new((0..g).map(|i| format!("g{i}")).collect(), (0..m).map(|i| format!("m{i}")).collect(), incidence).unwrap()
    }

    #[test]
    fn empty_incidence_gives_top_and_bottom() {
        let l = fca_lattice(&ctx(3, 2, &[vec![], vec![], vec![]]), 10).unwrap();
        assert_eq!(l.nodes.len(), 2);
        assert_eq!(l.nodes[l.top], FormalConcept { extent: vec![0, 1, 2], intent: vec![] });
        assert_eq!(l.nodes[l.bottom], FormalConcept { extent: vec![], intent: vec![0, 1] });
        assert_eq!(l.covers, BTreeSet::from([(1, 0)]));
    }

    #[test]
    fn full_incidence_is_one_node() {
        let l = fca_lattice(&ctx(2, 2, &[vec![0, 1], vec![0, 1]]), 10).unwrap();
        assert_eq!(l.nodes.len(), 1);
        assert_eq!(l.top, l.bottom);
        assert!(l.covers.is_empty());
    }

    #[test]
    fn size_limit() {
        let c = ctx(3, 1, &[vec![0], vec![0], vec![]]);
        assert!(matches!(fca_lattice(&c, 2), Err(Error::SizeLimit { objects: 3, limit: 2 })));
    }

    #[test]
    fn duplicate_objects_are_rejected() {
        let r = FormalContext::new(vec!["a".into(), "a".into()], vec!["x".into()], &[vec![], vec![]]);
        assert!(r.is_err());
    }

    #[test]
    fn matches_brute_force_on_random_contexts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let c = random_context(&mut rng, 8, 8);
            let l = fca_lattice(&c, 100).unwrap();
            assert_eq!(lattice_sets(&l), brute_force(&c));
        }
    }

    proptest! {
        #[test]
        fn every_node_is_closed(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_context(&mut rng, 12, 12);
            let l = fca_lattice(&c, 100).unwrap();
            for node in &l.nodes {
                let mut e = FixedBitSet::with_capacity(c.objects.len());
                node.extent.iter().for_each(|&i| e.insert(i));
                let i = c.intent_of(&e);
                prop_assert_eq!(to_vec(&i), node.intent.clone());
                prop_assert_eq!(to_vec(&c.extent_of(&i)), node.extent.clone());
            }
        }

        #[test]
        fn adding_an_attribute_keeps_old_extents_closed(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_context(&mut rng, 8, 6);
            let before = fca_lattice(&c, 100).unwrap();
            let g = c.objects.len();
            let mut incidence: Vec<Vec<usize>> = (0..g).map(|o| to_vec(c.row(o))).collect();
            let extra = c.attributes.len();
            for (o, row) in incidence.iter_mut().enumerate() {
                if rng.random_bool(0.5) || o == 0 {
                    row.push(extra);
                }
            }
            let mut attrs = c.attributes.clone();
            attrs.push("extra".into());
            let grown = FormalContext::new(c.objects.clone(), attrs, &incidence).unwrap();
            let after: BTreeSet<Vec<usize>> = fca_lattice(&grown, 100).unwrap().nodes.into_iter().map(|n| n.extent).collect();
            for node in before.nodes {
                prop_assert!(after.contains(&node.extent));
            }
        }
    }
}
