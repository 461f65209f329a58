use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kg::KnowledgeGraph;

/// Betweenness centrality of every concept.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CentralityIndex {
    pub values: BTreeMap<String, f64>,
}

impl CentralityIndex {
    /// Unknown concepts count as 0.
    pub fn get(&self, uri: &str) -> f64 {
        self.values.get(uri).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum BetweennessMode {
    Exact,
    /// Brandes from `samples` random sources, scaled to the full node count.
    Sampled {
        samples: usize,
        seed: u64,
    },
}

/// Undirected concept graph: one node per concept, one edge per distinct
/// subject-object pair of a triple.
pub fn concept_graph(kg: &KnowledgeGraph) -> (Vec<&str>, Vec<Vec<usize>>) {
    let nodes: Vec<&str> = kg.concepts.keys().map(String::as_str).collect();
    let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, u)| (*u, i)).collect();
    let mut edges = BTreeSet::new();
    for t in &kg.triples {
        if let (Some(&a), Some(&b)) = (index.get(t.subject_uri.as_str()), index.get(t.object_uri.as_str())) {
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    let mut adj = vec![Vec::new(); nodes.len()];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (nodes, adj)
}

pub fn compute_betweenness(kg: &KnowledgeGraph) -> CentralityIndex {
    compute_betweenness_with(kg, BetweennessMode::Exact)
}

pub fn compute_betweenness_with(kg: &KnowledgeGraph, mode: BetweennessMode) -> CentralityIndex {
    let (nodes, adj) = concept_graph(kg);
    let values = match mode {
        BetweennessMode::Exact => betweenness(&adj),
        BetweennessMode::Sampled { samples, seed } => betweenness_sampled(&adj, samples, seed),
    };
    CentralityIndex { values: nodes.into_iter().map(str::to_string).zip(values).collect() }
}

/// Dependency contributions of one source (Brandes), added into `acc`.
fn accumulate(adj: &[Vec<usize>], s: usize, acc: &mut [f64]) {
    let n = adj.len();
    let mut sigma = vec![0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([s]);
    sigma[s] = 1.0;
    dist[s] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
            }
        }
    }
    let mut delta = vec![0f64; n];
    for &w in order.iter().rev() {
        for &v in &adj[w] {
            if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        if w != s {
            acc[w] += delta[w];
        }
    }
}

const CHUNK: usize = 64;

/// Sums per-source contributions over fixed chunks so the result does not
/// depend on thread scheduling.
fn from_sources(adj: &[Vec<usize>], sources: &[usize]) -> Vec<f64> {
    let n = adj.len();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0f64; n];
            for &s in chunk {
                accumulate(adj, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0f64; n];
    for p in partials {
        total.iter_mut().zip(p).for_each(|(t, v)| *t += v);
    }
    total
}

/// Exact betweenness of an undirected graph given as adjacency lists.
pub fn betweenness(adj: &[Vec<usize>]) -> Vec<f64> {
    let sources: Vec<usize> = (0..adj.len()).collect();
    from_sources(adj, &sources).into_iter().map(|v| v / 2.0).collect()
}

/// Estimate from a seeded sample of sources; exact when `samples >= n`.
pub fn betweenness_sampled(adj: &[Vec<usize>], samples: usize, seed: u64) -> Vec<f64> {
    let n = adj.len();
    if samples >= n {
        return betweenness(adj);
    }
    if samples == 0 {
        return vec![0.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources = sample(&mut rng, n, samples).into_vec();
    sources.sort_unstable();
    let scale = n as f64 / samples as f64 / 2.0;
    from_sources(adj, &sources).into_iter().map(|v| v * scale).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use rand::Rng;

    use super::*;

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// Floyd-Warshall distances, path counts by distance layers, then the
    /// pair-sum definition.
    pub(crate) fn brute_force(adj: &[Vec<usize>]) -> Vec<f64> {
        let n = adj.len();
        const INF: usize = usize::MAX / 4;
        let mut d = vec![vec![INF; n]; n];
        for v in 0..n {
            d[v][v] = 0;
            for &w in &adj[v] {
                d[v][w] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        let mut sigma = vec![vec![0f64; n]; n];
        for s in 0..n {
            sigma[s][s] = 1.0;
            let mut by_dist: Vec<usize> = (0..n).filter(|&t| t != s && d[s][t] < INF).collect();
            by_dist.sort_by_key(|&t| d[s][t]);
            for t in by_dist {
                sigma[s][t] = adj[t].iter().filter(|&&u| d[s][u] + 1 == d[s][t]).map(|&u| sigma[s][u]).sum();
            }
        }
        let mut bc = vec![0f64; n];
        for s in 0..n {
            for t in s + 1..n {
                if d[s][t] >= INF {
                    continue;
                }
                for v in 0..n {
                    if v != s && v != t && d[s][v] + d[v][t] == d[s][t] {
                        bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                    }
                }
            }
        }
        bc
    }

    pub(crate) fn random_graph(rng: &mut impl Rng, max_nodes: usize) -> Vec<Vec<usize>> {
        let n = rng.random_range(1..=max_nodes);
        let p = rng.random_range(0.02..0.4);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        adjacency(n, &edges)
    }

    #[test]
    fn star_and_path() {
        let star = adjacency(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(betweenness(&star), [6.0, 0.0, 0.0, 0.0, 0.0]);
        let path = adjacency(3, &[(0, 1), (1, 2)]);
        assert_eq!(betweenness(&path), [0.0, 1.0, 0.0]);
        assert!(betweenness(&[]).is_empty());
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let adj = random_graph(&mut rng, 30);
            for (a, b) in betweenness(&adj).iter().zip(brute_force(&adj)) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn sampling_is_seeded_and_exact_at_full_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let adj = random_graph(&mut rng, 40);
        assert_eq!(betweenness_sampled(&adj, adj.len(), 1), betweenness(&adj));
        let k = adj.len() / 2;
        assert_eq!(betweenness_sampled(&adj, k, 9), betweenness_sampled(&adj, k, 9));
    }

    #[test]
    fn graph_from_triples() {
        use crate::kg::{build_graph, ingest_corpus, BuildOptions, RawDocument};
        use crate::nlp::RuleBasedParser;
        let parser = RuleBasedParser::default();
        let text = "The lender approved the loan. The loan funded the house. The house needs a roof.";
        let corpus = ingest_corpus(&[RawDocument::new("t", text)], &parser).unwrap();
        let kg = build_graph(corpus, &parser, &BuildOptions::default()).unwrap();
        let c = compute_betweenness(&kg);
        assert_eq!(c.len(), kg.concepts.len());
        assert_eq!(c.get("ns:loan"), 2.0);
        assert_eq!(c.get("ns:house"), 2.0);
        assert_eq!(c.get("ns:lender"), 0.0);
        assert_eq!(c.get("ns:roof"), 0.0);
    }
}
