use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::error::ServiceError;
use crate::runtime::Runtime;

pub const DEFAULT_SEARCH_LIMIT: usize = 50;

/// Shared server state: the current snapshot, swapped atomically on reload.
pub struct AppState {
    runtime: RwLock<Option<Arc<Runtime>>>,
    pub snapshot_dir: Option<PathBuf>,
    pub max_annotate_bytes: usize,
}

impl AppState {
    pub fn new(runtime: Option<Runtime>, snapshot_dir: Option<PathBuf>, max_annotate_bytes: usize) -> Arc<Self> {
        Arc::new(AppState { runtime: RwLock::new(runtime.map(Arc::new)), snapshot_dir, max_annotate_bytes })
    }

    pub fn current(&self) -> Option<Arc<Runtime>> {
        self.runtime.read().expect("state lock").clone()
    }

    pub fn swap(&self, runtime: Runtime) {
        *self.runtime.write().expect("state lock") = Some(Arc::new(runtime));
    }
}

fn error(status: StatusCode, message: impl ToString) -> Response {
    (status, Json(json!({ "error": message.to_string() }))).into_response()
}

fn no_snapshot() -> Response {
    error(StatusCode::SERVICE_UNAVAILABLE, "no snapshot loaded")
}

fn json_bytes(body: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn health(State(state): State<Arc<AppState>>) -> Response {
    match state.current() {
        None => Json(json!({ "status": "no snapshot" })).into_response(),
        Some(rt) => Json(json!({
            "status": "ok",
            "schema_version": rt.meta.schema_version,
            "corpus_hash": rt.meta.corpus_hash,
            "config_hash": rt.meta.config_hash,
            "counts": rt.meta.counts,
        }))
        .into_response(),
    }
}

async fn overview(State(state): State<Arc<AppState>>, Path(uri): Path<String>) -> Response {
    let Some(rt) = state.current() else { return no_snapshot() };
    let result = tokio::task::spawn_blocking(move || rt.overview(&uri).map(|o| serde_json::to_vec(&*o).expect("overview serializes"))).await;
    match result {
        Ok(Ok(body)) => json_bytes(body),
        Ok(Err(ServiceError::Core(espace_core::Error::MissingConcept(uri)))) => error(StatusCode::NOT_FOUND, format!("unknown concept {uri}")),
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

#[derive(Debug, Deserialize)]
struct AnnotateRequest {
    text: String,
    #[serde(default)]
    html: bool,
}

async fn annotate(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let Some(rt) = state.current() else { return no_snapshot() };
    let req: AnnotateRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    if req.text.len() > state.max_annotate_bytes {
        return error(StatusCode::PAYLOAD_TOO_LARGE, format!("text is {} bytes, limit is {}", req.text.len(), state.max_annotate_bytes));
    }
    let result = tokio::task::spawn_blocking(move || rt.annotate(&req.text, req.html)).await;
    match result {
        Ok(r) => Json(r).into_response(),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

async fn taxonomy(State(state): State<Arc<AppState>>) -> Response {
    let Some(rt) = state.current() else { return no_snapshot() };
    Json(&rt.forest).into_response()
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    #[serde(default)]
    q: String,
    limit: Option<usize>,
}

async fn concepts(State(state): State<Arc<AppState>>, Query(p): Query<SearchParams>) -> Response {
    let Some(rt) = state.current() else { return no_snapshot() };
    Json(rt.search(&p.q, p.limit.unwrap_or(DEFAULT_SEARCH_LIMIT))).into_response()
}

async fn reload(State(state): State<Arc<AppState>>) -> Response {
    let Some(dir) = state.snapshot_dir.clone() else {
        return error(StatusCode::CONFLICT, "server was started without a snapshot directory");
    };
    match tokio::task::spawn_blocking(move || Runtime::load(&dir)).await {
        Ok(Ok(rt)) => {
            let hashes = json!({ "corpus_hash": rt.meta.corpus_hash, "config_hash": rt.meta.config_hash });
            state.swap(rt);
            Json(hashes).into_response()
        }
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

/// Routes: `GET /health`, `GET /overview/{uri}`, `POST /annotate`,
/// `GET /taxonomy`, `GET /concepts?q=`, `POST /reload`, and static files
/// from `static_dir` for everything else.
pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    // room for JSON escaping of a text at the size cap
    let body_limit = state.max_annotate_bytes.saturating_mul(6).saturating_add(1024);
    let app = Router::new()
        .route("/health", get(health))
        .route("/overview/{uri}", get(overview))
        .route("/annotate", post(annotate))
        .route("/taxonomy", get(taxonomy))
        .route("/concepts", get(concepts))
        .route("/reload", post(reload))
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(state);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}
