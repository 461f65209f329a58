//! Ingestion pipeline, snapshot persistence and HTTP API.

pub mod config;
pub mod embedder;
pub mod error;
pub mod http;
pub mod manifest;
pub mod pipeline;
pub mod runtime;
pub mod snapshot;

pub use config::PipelineConfig;
pub use error::{Result, ServiceError};
pub use http::{router, AppState};
pub use pipeline::{build_snapshot, ingest, Snapshot, SnapshotMeta};
pub use runtime::Runtime;
pub use snapshot::{read_snapshot, write_snapshot};
