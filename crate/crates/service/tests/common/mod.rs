#![allow(dead_code)]

use std::path::{Path, PathBuf};

use espace_service::{ingest, write_snapshot, PipelineConfig, Runtime};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().expect("repo root")
}

pub fn toy_manifest() -> PathBuf {
    repo_root().join("fixtures/toy/manifest.tsv")
}

pub fn example_config() -> PipelineConfig {
    PipelineConfig::from_path(&repo_root().join("config/example.toml")).expect("example config")
}

/// Ingests the toy corpus into `dir` and loads it.
pub fn toy_runtime(dir: &Path) -> Runtime {
    let snapshot = ingest(&toy_manifest(), &example_config()).expect("ingest");
    write_snapshot(dir, &snapshot).expect("write snapshot");
    Runtime::load(dir).expect("load snapshot")
}
