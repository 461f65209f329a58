use std::io::Read;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use espace_service::http::{router, AppState};
use espace_service::{ingest, write_snapshot, PipelineConfig, Runtime, ServiceError};

#[derive(Parser)]
#[command(name = "espace", version, about = "Build and explore explanatory spaces over document corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a snapshot from a corpus manifest.
    Ingest {
        /// TSV manifest: path<TAB>title per line.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Pipeline configuration (TOML).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Snapshot directory to write.
        #[arg(long, env = "ES_SNAPSHOT_DIR")]
        out: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "ES_SNAPSHOT_DIR")]
        snapshot: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        /// Overrides the configured port.
        #[arg(long)]
        port: Option<u16>,
        /// Directory of static assets served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
    /// Print the overview of a concept as JSON.
    Overview {
        uri: String,
        #[arg(long, env = "ES_SNAPSHOT_DIR")]
        snapshot: PathBuf,
    },
    /// Annotate text (argument, --file, or stdin) and print the annotations as JSON.
    Annotate {
        text: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Also emit HTML with linked mentions.
        #[arg(long)]
        html: bool,
        #[arg(long, env = "ES_SNAPSHOT_DIR")]
        snapshot: PathBuf,
    },
}

type CliResult = Result<(), Box<dyn std::error::Error>>;

fn run_ingest(manifest: Option<PathBuf>, config: Option<PathBuf>, out: &Path) -> CliResult {
    let mut cfg = match &config {
        Some(p) => PipelineConfig::from_path(p)?,
        None => PipelineConfig::default(),
    };
    if manifest.is_some() {
        cfg.manifest = manifest;
    }
    let Some(manifest) = cfg.manifest.clone() else {
        return Err("no manifest: pass --manifest or set `manifest` in the config".into());
    };
    let snapshot = ingest(&manifest, &cfg)?;
    write_snapshot(out, &snapshot)?;
    let m = &snapshot.meta;
    for w in &m.warnings {
        eprintln!("warning: {w}");
    }
    println!("snapshot: {}", out.display());
    println!("corpus_hash: {}", m.corpus_hash);
    println!("config_hash: {}", m.config_hash);
    println!("documents: {}", m.counts.documents);
    println!("concepts: {}", m.counts.concepts);
    println!("triples: {}", m.counts.triples);
    println!("trees: {}", m.counts.trees);
    Ok(())
}

async fn run_serve(snapshot: Option<PathBuf>, bind: String, port: Option<u16>, static_dir: Option<PathBuf>) -> CliResult {
    let runtime = match &snapshot {
        Some(dir) if dir.join(espace_service::snapshot::META_FILE).exists() => Some(Runtime::load(dir)?),
        Some(dir) => {
            tracing::warn!("no snapshot in {}; serving without one", dir.display());
            None
        }
        None => None,
    };
    let server_cfg = runtime.as_ref().map(|r| r.config.server.clone()).unwrap_or_default();
    let state = AppState::new(runtime, snapshot, server_cfg.max_annotate_bytes);
    let app = router(state.clone(), static_dir.or(server_cfg.static_dir));
    let addr: SocketAddr = format!("{bind}:{}", port.unwrap_or(server_cfg.port)).parse()?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    println!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(rt) = state.current() {
        rt.save_cache()?;
    }
    Ok(())
}

fn read_text(text: Option<String>, file: Option<PathBuf>) -> Result<String, Box<dyn std::error::Error>> {
    Ok(match (text, file) {
        (Some(t), _) => t,
        (None, Some(f)) => std::fs::read_to_string(&f).map_err(|source| ServiceError::Io { path: f, source })?,
        (None, None) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    })
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()))
        .with_writer(std::io::stderr)
        .init();
    let result: CliResult = match Cli::parse().command {
        Command::Ingest { manifest, config, out } => run_ingest(manifest, config, &out),
        Command::Serve { snapshot, bind, port, static_dir } => {
            tokio::runtime::Runtime::new().map_err(Into::into).and_then(|rt| rt.block_on(run_serve(snapshot, bind, port, static_dir)))
        }
        Command::Overview { uri, snapshot } => (|| {
            let rt = Runtime::load(&snapshot)?;
            let o = rt.overview(&uri)?;
            println!("{}", serde_json::to_string_pretty(&*o)?);
            rt.save_cache()?;
            Ok(())
        })(),
        Command::Annotate { text, file, html, snapshot } => (|| {
            let text = read_text(text, file)?;
            let rt = Runtime::load(&snapshot)?;
            println!("{}", serde_json::to_string_pretty(&rt.annotate(&text, html))?);
            Ok(())
        })(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
