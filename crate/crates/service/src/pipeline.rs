use std::path::Path;
use std::sync::Arc;

use espace_core::annotate::{compute_betweenness_with, CentralityIndex, FrequencyTable};
use espace_core::kg::{build_graph, ingest_corpus, BuildOptions, KnowledgeGraph, RawDocument, UriMinter};
use espace_core::nlp::{LexicalKnowledgeBase, MostFrequentSense, RuleBasedParser, SenseDisambiguator};
use espace_core::taxonomy::{align_concepts, build_formal_context, extract_forest, fca_lattice, Alignment, TaxonomyForest};
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::Result;
use crate::manifest::{corpus_hash, load_documents, read_manifest};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub documents: usize,
    pub paragraphs: usize,
    pub sentences: usize,
    pub concepts: usize,
    pub triples: usize,
    pub subclass_edges: usize,
    pub aligned: usize,
    pub unaligned: usize,
    pub trees: usize,
    pub forest_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub schema_version: u32,
    pub corpus_hash: String,
    pub config_hash: String,
    pub counts: Counts,
    /// Skipped files and sentences that failed to parse.
    pub warnings: Vec<String>,
}

/// Everything ingestion produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub meta: SnapshotMeta,
    pub config: PipelineConfig,
    pub kg: KnowledgeGraph,
    pub alignment: Alignment,
    pub forest: TaxonomyForest,
    pub centrality: CentralityIndex,
}

pub fn load_knowledge_base(config: &PipelineConfig) -> Result<Arc<LexicalKnowledgeBase>> {
    Ok(match &config.wsd.lexical_db {
        None => LexicalKnowledgeBase::english(),
        Some(p) if p.is_dir() => Arc::new(LexicalKnowledgeBase::from_wordnet_dir(p)?),
        Some(p) => Arc::new(LexicalKnowledgeBase::from_path(p)?),
    })
}

pub fn load_frequency_table(config: &PipelineConfig) -> Result<Arc<FrequencyTable>> {
    Ok(Arc::new(match &config.frequency_table {
        None => FrequencyTable::english().clone(),
        Some(p) => FrequencyTable::from_path(p)?,
    }))
}

/// Builds the forest, or an empty one when nothing aligns.
pub fn build_forest(kg: &KnowledgeGraph, wsd: &dyn SenseDisambiguator, config: &PipelineConfig) -> Result<(Alignment, TaxonomyForest)> {
    let alignment = align_concepts(kg, wsd);
    if alignment.is_empty() {
        return Ok((alignment, TaxonomyForest::default()));
    }
    let ctx = build_formal_context(&alignment, &config.excluded_attributes)?;
    let lattice = fca_lattice(&ctx, config.fca_object_limit)?;
    let forest = extract_forest(&lattice, &ctx, &alignment, wsd, kg);
    Ok((alignment, forest))
}

/// Graph, taxonomy and centrality for `docs`. Overviews are generated later,
/// on demand.
pub fn build_snapshot(docs: &[RawDocument], config: &PipelineConfig, mut warnings: Vec<String>) -> Result<Snapshot> {
    config.validate()?;
    let parser = RuleBasedParser::default();
    let corpus = ingest_corpus(docs, &parser)?;
    tracing::info!(documents = corpus.documents.len(), sentences = corpus.sentences.len(), "corpus ingested");
    let options = BuildOptions { minter: UriMinter::new(config.namespace.clone()), parallel: true };
    let kg = build_graph(corpus, &parser, &options)?;
    tracing::info!(concepts = kg.concepts.len(), triples = kg.triples.len(), "graph built");
    let wsd = MostFrequentSense::new(load_knowledge_base(config)?);
    let (alignment, forest) = build_forest(&kg, &wsd, config)?;
    tracing::info!(trees = forest.trees.len(), "taxonomy built");
    let centrality = compute_betweenness_with(&kg, config.betweenness);
    warnings.extend(kg.warnings.iter().cloned());
    let c = &kg.corpus;
    let counts = Counts {
        documents: c.documents.len(),
        paragraphs: c.paragraphs.len(),
        sentences: c.sentences.len(),
        concepts: kg.concepts.len(),
        triples: kg.triples.len(),
        subclass_edges: kg.subclass_edges.len(),
        aligned: alignment.senses.len(),
        unaligned: alignment.misses.len(),
        trees: forest.trees.len(),
        forest_nodes: forest.node_count(),
    };
    Ok(Snapshot {
        meta: SnapshotMeta { schema_version: SCHEMA_VERSION, corpus_hash: corpus_hash(docs), config_hash: config.hash(), counts, warnings },
        config: config.clone(),
        kg,
        alignment,
        forest,
        centrality,
    })
}

/// Reads the manifest and builds the snapshot.
pub fn ingest(manifest: &Path, config: &PipelineConfig) -> Result<Snapshot> {
    let entries = read_manifest(manifest)?;
    let (docs, warnings) = load_documents(&entries);
    for w in &warnings {
        tracing::warn!("{w}");
    }
    build_snapshot(&docs, config, warnings)
}
