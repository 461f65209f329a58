use std::path::{Path, PathBuf};

use espace_core::annotate::{BetweennessMode, DEFAULT_RANK_CUTOFF};
use espace_core::kg::DEFAULT_NAMESPACE;
use espace_core::overview::OverviewConfig;
use espace_core::taxonomy::{DEFAULT_EXCLUDED_ATTRIBUTES, DEFAULT_OBJECT_LIMIT};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_err, Result, ServiceError};

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_MAX_ANNOTATE_BYTES: usize = 64 * 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EmbedderConfig {
    /// Built-in hashed bag-of-lemmas encoder.
    Hashing { dimension: usize, context_weight: f64 },
    /// Remote encoder speaking the JSON protocol of [`crate::embedder::HttpEmbedder`].
    Http { url: String, dimension: usize, timeout_secs: u64 },
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        EmbedderConfig::Hashing {
            dimension: espace_core::nlp::embed::DEFAULT_DIMENSION,
            context_weight: espace_core::nlp::embed::DEFAULT_CONTEXT_WEIGHT,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummarizerConfig {
    #[default]
    LeadSentence,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WsdConfig {
    /// WordNet `dict/` directory or a lexical TSV; the bundled base when unset.
    pub lexical_db: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub port: u16,
    pub max_annotate_bytes: usize,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { port: DEFAULT_PORT, max_annotate_bytes: DEFAULT_MAX_ANNOTATE_BYTES, static_dir: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub manifest: Option<PathBuf>,
    pub namespace: String,
    pub embedder: EmbedderConfig,
    pub summarizer: SummarizerConfig,
    pub wsd: WsdConfig,
    /// `lemma<TAB>rank` file; the bundled table when unset.
    pub frequency_table: Option<PathBuf>,
    pub rank_cutoff: usize,
    pub excluded_attributes: Vec<String>,
    pub fca_object_limit: usize,
    pub betweenness: BetweennessMode,
    pub overview: OverviewConfig,
    pub server: ServerConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            manifest: None,
            namespace: DEFAULT_NAMESPACE.to_string(),
            embedder: EmbedderConfig::default(),
            summarizer: SummarizerConfig::default(),
            wsd: WsdConfig::default(),
            frequency_table: None,
            rank_cutoff: DEFAULT_RANK_CUTOFF,
            excluded_attributes: DEFAULT_EXCLUDED_ATTRIBUTES.iter().map(|s| s.to_string()).collect(),
            fca_object_limit: DEFAULT_OBJECT_LIMIT,
            betweenness: BetweennessMode::Exact,
            overview: OverviewConfig::default(),
            server: ServerConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: PipelineConfig = toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a TOML file; relative paths inside it resolve against its directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut().filter(|q| q.is_relative()) {
                *q = base.join(&*q);
            }
        };
        resolve(&mut config.manifest);
        resolve(&mut config.frequency_table);
        resolve(&mut config.wsd.lexical_db);
        resolve(&mut config.server.static_dir);
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ServiceError::Config(m));
        if self.namespace.is_empty() {
            return bad("namespace must not be empty".into());
        }
        if self.rank_cutoff == 0 {
            return bad("rank_cutoff must be at least 1".into());
        }
        if self.fca_object_limit == 0 {
            return bad("fca_object_limit must be at least 1".into());
        }
        if self.server.max_annotate_bytes == 0 {
            return bad("server.max_annotate_bytes must be at least 1".into());
        }
        if let BetweennessMode::Sampled { samples: 0, .. } = self.betweenness {
            return bad("betweenness samples must be at least 1".into());
        }
        match &self.embedder {
            EmbedderConfig::Hashing { dimension, context_weight } => {
                if *dimension == 0 || !context_weight.is_finite() || *context_weight < 0.0 {
                    return bad("hashing embedder needs dimension >= 1 and context_weight >= 0".into());
                }
            }
            EmbedderConfig::Http { url, dimension, .. } => {
                if url.is_empty() || *dimension == 0 {
                    return bad("http embedder needs a url and dimension >= 1".into());
                }
            }
        }
        self.overview.validate()?;
        Ok(())
    }

    /// Hash of every setting that affects snapshot or overview content. The
    /// manifest location and server settings are excluded.
    pub fn hash(&self) -> String {
        let mut identity = self.clone();
        identity.manifest = None;
        identity.server = ServerConfig::default();
        let json = serde_json::to_vec(&identity).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

#[cfg(test)]
mod tests {
    use espace_core::overview::Archetype;

    use super::*;

    #[test]
    fn empty_toml_gives_defaults() {
        assert_eq!(PipelineConfig::from_toml("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn partial_toml_overrides() {
        let c = PipelineConfig::from_toml(
            r#"
            namespace = "ex:"
            rank_cutoff = 500
            betweenness = { mode = "sampled", samples = 10, seed = 3 }
            [overview]
            pertinence_threshold = 0.2
            archetype_order = ["what", "why", "what-for", "how", "who", "where", "when"]
            [overview.question_texts]
            why = "why because reason"
            [server]
            port = 9000
            "#,
        )
        .unwrap();
        assert_eq!(c.namespace, "ex:");
        assert_eq!(c.rank_cutoff, 500);
        assert_eq!(c.overview.fanout, 3);
        assert_eq!(c.overview.archetype_order[0], Archetype::What);
        assert_eq!(c.overview.question_texts[&Archetype::Why], "why because reason");
        assert_eq!(c.server.port, 9000);
        assert_eq!(c.betweenness, BetweennessMode::Sampled { samples: 10, seed: 3 });
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            "rank_cutoff = 0",
            "namespace = \"\"",
            "unknown_key = 1",
            "[overview]\npertinence_threshold = 2.0",
            "[overview]\nfanout = 1",
            "[embedder]\nkind = \"hashing\"\ndimension = 0\ncontext_weight = 0.5",
        ] {
            assert!(PipelineConfig::from_toml(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn hash_ignores_server_and_manifest() {
        let a = PipelineConfig::default();
        let mut b = a.clone();
        b.server.port = 1;
        b.manifest = Some("x.tsv".into());
        assert_eq!(a.hash(), b.hash());
        b.rank_cutoff = 7;
        assert_ne!(a.hash(), b.hash());
    }
}
