//! Per-concept overviews: candidate snippets, pertinence clustering over the
//! archetypal questions, and expandable summary trees.

pub mod archetype;
pub mod candidates;
pub mod cluster;
pub mod embed_cache;
pub mod generator;
pub mod tree;

pub use archetype::{ArchetypalQuestion, Archetype, QuestionSet};
pub use candidates::{gather_candidates, Candidate};
pub use cluster::{cluster_answers, score_candidates, score_pertinence, Clusters, PertinentAnswer};
pub use embed_cache::{CachedEmbedding, CachingEmbedder};
pub use generator::{ArchetypeTrees, Overview, OverviewConfig, OverviewGenerator};
pub use tree::{build_summary_tree, LeafAnswer, SummaryTree};
