//! On-disk layout of a snapshot directory:
//!
//! - `snapshot.json`: schema version, corpus and config hashes, counts, warnings
//! - `config.json`: the pipeline configuration
//! - `graph.jsonl`: knowledge graph records
//! - `alignment.jsonl`: sense of each aligned concept, then the misses
//! - `taxonomy.jsonl`: forest records in tree order
//! - `centrality.jsonl`: betweenness per concept
//! - `cache/`: embedding cache, written by the server and CLI

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use espace_core::annotate::CentralityIndex;
use espace_core::kg::io::{read_graph, read_jsonl, write_graph, write_jsonl};
use espace_core::nlp::SenseEntry;
use espace_core::taxonomy::{Alignment, ForestRecord, TaxonomyForest};
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{io_err, Result, ServiceError};
use crate::pipeline::{Snapshot, SnapshotMeta, SCHEMA_VERSION};

pub const META_FILE: &str = "snapshot.json";
pub const CONFIG_FILE: &str = "config.json";
pub const GRAPH_FILE: &str = "graph.jsonl";
pub const ALIGNMENT_FILE: &str = "alignment.jsonl";
pub const TAXONOMY_FILE: &str = "taxonomy.jsonl";
pub const CENTRALITY_FILE: &str = "centrality.jsonl";
pub const CACHE_DIR: &str = "cache";
pub const EMBEDDING_CACHE_FILE: &str = "embeddings.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum AlignmentRecord {
    Sense { uri: String, sense: SenseEntry },
    Miss { uri: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CentralityRecord {
    uri: String,
    betweenness: f64,
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write(&mut out).and_then(|_| out.flush()).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        out.write_all(b"\n")
    })
}

fn write_contents(dir: &Path, s: &Snapshot) -> Result<()> {
    write_json(&dir.join(META_FILE), &s.meta)?;
    write_json(&dir.join(CONFIG_FILE), &s.config)?;
    write_file(&dir.join(GRAPH_FILE), |out| write_graph(&s.kg, out))?;
    let alignment = s
        .alignment
        .senses
        .iter()
        .map(|(uri, sense)| AlignmentRecord::Sense { uri: uri.clone(), sense: sense.clone() })
        .chain(s.alignment.misses.iter().map(|uri| AlignmentRecord::Miss { uri: uri.clone() }));
    write_file(&dir.join(ALIGNMENT_FILE), |out| write_jsonl(alignment, out))?;
    write_file(&dir.join(TAXONOMY_FILE), |out| write_jsonl(s.forest.records(), out))?;
    let centrality = s.centrality.values.iter().map(|(uri, &b)| CentralityRecord { uri: uri.clone(), betweenness: b });
    write_file(&dir.join(CENTRALITY_FILE), |out| write_jsonl(centrality, out))
}

fn sibling(dir: &Path, tag: &str) -> PathBuf {
    let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "snapshot".into());
    dir.with_file_name(format!(".{name}.{tag}-{}", std::process::id()))
}

/// Writes into a temporary sibling and swaps it in, carrying over an
/// existing embedding cache.
pub fn write_snapshot(dir: &Path, s: &Snapshot) -> Result<()> {
    if let Some(parent) = dir.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let tmp = sibling(dir, "tmp");
    if tmp.exists() {
        fs::remove_dir_all(&tmp).map_err(io_err(&tmp))?;
    }
    fs::create_dir_all(&tmp).map_err(io_err(&tmp))?;
    write_contents(&tmp, s)?;
    if dir.exists() {
        let old = sibling(dir, "old");
        fs::rename(dir, &old).map_err(io_err(dir))?;
        let cache = old.join(CACHE_DIR);
        if cache.is_dir() {
            fs::rename(&cache, tmp.join(CACHE_DIR)).map_err(io_err(&cache))?;
        }
        fs::rename(&tmp, dir).map_err(io_err(dir))?;
        fs::remove_dir_all(&old).map_err(io_err(&old))?;
    } else {
        fs::rename(&tmp, dir).map_err(io_err(dir))?;
    }
    Ok(())
}

fn read(dir: &Path, file: &str) -> Result<String> {
    let path = dir.join(file);
    fs::read_to_string(&path).map_err(io_err(path))
}

fn snapshot_err(dir: &Path, reason: impl ToString) -> ServiceError {
    ServiceError::Snapshot { path: dir.to_path_buf(), reason: reason.to_string() }
}

pub fn read_meta(dir: &Path) -> Result<SnapshotMeta> {
    let meta: SnapshotMeta = serde_json::from_str(&read(dir, META_FILE)?).map_err(|e| snapshot_err(dir, e))?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(snapshot_err(dir, format!("schema version {} is not {SCHEMA_VERSION}", meta.schema_version)));
    }
    Ok(meta)
}

pub fn read_snapshot(dir: &Path) -> Result<Snapshot> {
    let meta = read_meta(dir)?;
    let config: PipelineConfig = serde_json::from_str(&read(dir, CONFIG_FILE)?).map_err(|e| snapshot_err(dir, e))?;
    if config.hash() != meta.config_hash {
        return Err(snapshot_err(dir, "config.json does not match the recorded config hash"));
    }
    let kg = read_graph(&read(dir, GRAPH_FILE)?)?;
    let mut alignment = Alignment::default();
    for r in read_jsonl::<AlignmentRecord>(&read(dir, ALIGNMENT_FILE)?, "alignment record")? {
        match r {
            AlignmentRecord::Sense { uri, sense } => {
                alignment.senses.insert(uri, sense);
            }
            AlignmentRecord::Miss { uri } => alignment.misses.push(uri),
        }
    }
    let records: Vec<ForestRecord> = read_jsonl(&read(dir, TAXONOMY_FILE)?, "taxonomy record")?;
    let forest = TaxonomyForest::from_records(&records);
    let centrality = CentralityIndex {
        values: read_jsonl::<CentralityRecord>(&read(dir, CENTRALITY_FILE)?, "centrality record")?
            .into_iter()
            .map(|r| (r.uri, r.betweenness))
            .collect(),
    };
    Ok(Snapshot { meta, config, kg, alignment, forest, centrality })
}
