use std::path::{Path, PathBuf};
use std::sync::Arc;

use espace_core::annotate::{to_html, Annotation, Annotator};
use espace_core::kg::io::write_jsonl;
use espace_core::nlp::LeadSentenceSummarizer;
use espace_core::overview::{CachingEmbedder, Overview, OverviewGenerator};
use espace_core::taxonomy::TaxonomyForest;
use serde::Serialize;

use crate::config::{PipelineConfig, SummarizerConfig};
use crate::embedder::make_embedder;
use crate::error::{io_err, Result};
use crate::pipeline::{load_frequency_table, Snapshot, SnapshotMeta};
use crate::snapshot::{read_snapshot, CACHE_DIR, EMBEDDING_CACHE_FILE};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptHit {
    pub uri: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotateResult {
    pub annotations: Vec<Annotation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub html: Option<String>,
}

/// A loaded snapshot with its query engines. Read-only once built.
pub struct Runtime {
    pub dir: Option<PathBuf>,
    pub meta: SnapshotMeta,
    pub config: PipelineConfig,
    pub forest: TaxonomyForest,
    generator: OverviewGenerator,
    annotator: Annotator,
    embedder: Arc<CachingEmbedder>,
    /// (lowercased label, uri, label), sorted.
    labels: Vec<(String, String, String)>,
}

impl Runtime {
    pub fn from_snapshot(s: Snapshot, dir: Option<PathBuf>) -> Result<Self> {
        let embedder = Arc::new(CachingEmbedder::new(make_embedder(&s.config.embedder)?));
        if let Some(d) = &dir {
            let path = d.join(CACHE_DIR).join(EMBEDDING_CACHE_FILE);
            if let Ok(text) = std::fs::read_to_string(&path) {
                match embedder.load_jsonl(&text) {
                    Ok(n) => tracing::info!(entries = n, "embedding cache loaded"),
                    Err(e) => tracing::warn!("ignoring embedding cache {}: {e}", path.display()),
                }
            }
        }
        let summarizer = match s.config.summarizer {
            SummarizerConfig::LeadSentence => Arc::new(LeadSentenceSummarizer),
        };
        let table = load_frequency_table(&s.config)?;
        let annotator = Annotator::new(&s.kg, &s.centrality, &table, s.config.rank_cutoff);
        let mut labels: Vec<(String, String, String)> =
            s.kg.concepts
                .values()
                .map(|c| (c.label.to_lowercase(), c.uri.clone(), c.label.clone()))
                .chain(
                    s.forest
                        .trees
                        .iter()
                        .flat_map(|t| t.nodes.iter())
                        .filter(|n| !s.kg.contains(&n.uri))
                        .map(|n| (n.label.to_lowercase(), n.uri.clone(), n.label.clone())),
                )
                .collect();
        labels.sort();
        labels.dedup_by(|a, b| a.1 == b.1);
        let kg = Arc::new(s.kg);
        let generator = OverviewGenerator::new(kg, &s.forest, embedder.clone(), summarizer, s.config.overview.clone())?;
        Ok(Runtime { dir, meta: s.meta, config: s.config, forest: s.forest, generator, annotator, embedder, labels })
    }

    pub fn load(dir: &Path) -> Result<Self> {
        Self::from_snapshot(read_snapshot(dir)?, Some(dir.to_path_buf()))
    }

    pub fn overview(&self, uri: &str) -> Result<Arc<Overview>> {
        Ok(self.generator.generate_overview(uri)?)
    }

    pub fn annotate(&self, text: &str, html: bool) -> AnnotateResult {
        let annotations = self.annotator.annotate(text);
        let html = html.then(|| to_html(text, &annotations));
        AnnotateResult { annotations, html }
    }

    /// Concepts whose label or URI local part starts with `prefix`,
    /// case-insensitively, sorted by label then URI.
    pub fn search(&self, prefix: &str, limit: usize) -> Vec<ConceptHit> {
        let p = prefix.to_lowercase();
        let ns = &self.config.namespace;
        self.labels
            .iter()
            .filter(|(lower, uri, _)| {
                let local = uri.strip_prefix(ns.as_str()).unwrap_or(uri).to_lowercase();
                lower.starts_with(&p) || local.starts_with(&p)
            })
            .take(limit)
            .map(|(_, uri, label)| ConceptHit { uri: uri.clone(), label: label.clone() })
            .collect()
    }

    /// Writes the embedding cache under the snapshot directory.
    pub fn save_cache(&self) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let cache = dir.join(CACHE_DIR);
        std::fs::create_dir_all(&cache).map_err(io_err(&cache))?;
        let path = cache.join(EMBEDDING_CACHE_FILE);
        let mut buf = Vec::new();
        write_jsonl(self.embedder.entries(), &mut buf).map_err(io_err(&path))?;
        std::fs::write(&path, buf).map_err(io_err(&path))
    }
}
