use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::routing::post;
use axum::{Json, Router};
use espace_core::nlp::Embedder;
use espace_service::embedder::{EmbedRequest, EmbedResponse, HttpEmbedder};

/// Serves `vector = [len(text), len(context), side == "question"]` padded to `dim`.
fn spawn_server(dim: usize) -> (String, Arc<Mutex<Vec<EmbedRequest>>>) {
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = seen.clone();
    let app = Router::new().route(
        "/embed",
        post(move |Json(req): Json<EmbedRequest>| {
            let log = log.clone();
            async move {
                let mut vector = vec![req.text.len() as f64, req.context.len() as f64, f64::from(u8::from(req.side == "question"))];
                vector.resize(dim, 0.0);
                log.lock().unwrap().push(req);
                Json(EmbedResponse { vector })
            }
        }),
    );
    let rt = tokio::runtime::Runtime::new().unwrap();
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || rt.block_on(async move { axum::serve(listener, app).await.unwrap() }));
    (format!("http://{addr}/embed"), seen)
}

#[test]
fn http_embedder_round_trip() {
    let (url, seen) = spawn_server(4);
    let e = HttpEmbedder::new(url, 4, Duration::from_secs(5)).unwrap();
    assert_eq!(e.embed_question("why").unwrap().0, [3.0, 0.0, 1.0, 0.0]);
    assert_eq!(e.embed_answer("a snippet", "its context").unwrap().0, [9.0, 11.0, 0.0, 0.0]);
    assert!(e.embed_answer("  ", "ctx").is_err());
    let log = seen.lock().unwrap();
    assert_eq!(log.len(), 2);
    assert_eq!(log[1].side, "answer");
    assert_eq!(log[1].context, "its context");
}

#[test]
fn http_embedder_rejects_wrong_dimension_and_dead_endpoint() {
    let (url, _) = spawn_server(3);
    let e = HttpEmbedder::new(url, 4, Duration::from_secs(5)).unwrap();
    assert!(e.embed_question("why").unwrap_err().to_string().contains("3 values"));

    let dead = HttpEmbedder::new("http://127.0.0.1:9/embed", 4, Duration::from_secs(2)).unwrap();
    assert!(dead.embed_question("why").is_err());
}
