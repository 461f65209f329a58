//! Sense alignment, formal concept analysis and taxonomy forests.

pub mod align;
pub mod fca;
pub mod forest;
pub mod queries;

pub use align::{align_concepts, build_formal_context, Alignment};
pub use fca::{fca_lattice, ConceptLattice, FormalConcept, FormalContext, DEFAULT_OBJECT_LIMIT};
pub use forest::{extract_forest, ForestNode, ForestRecord, NodeKind, TaxonomyForest, TaxonomyTree};
pub use queries::Taxonomy;

/// Attributes shared by nearly every noun sense; excluded from contexts by default.
pub const DEFAULT_EXCLUDED_ATTRIBUTES: &[&str] = &["entity.n.01"];
