//! Concept annotation of explanatory text with relevance filtering.

pub mod betweenness;
pub mod frequency;
pub mod matcher;

pub use betweenness::{
    betweenness, betweenness_sampled, compute_betweenness, compute_betweenness_with, concept_graph, BetweennessMode, CentralityIndex,
};
pub use frequency::{is_common_knowledge, FrequencyTable, DEFAULT_RANK_CUTOFF};
pub use matcher::{annotate, to_html, Annotation, Annotator, MentionIndex};
