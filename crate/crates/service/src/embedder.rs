use std::sync::Arc;
use std::time::Duration;

use espace_core::nlp::{Embedder, EmbeddingVector, HashingEmbedder};
use espace_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use crate::config::EmbedderConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedRequest {
    /// "question" or "answer".
    pub side: String,
    pub text: String,
    #[serde(default)]
    pub context: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedResponse {
    pub vector: Vec<f64>,
}

/// Dual encoder behind an HTTP endpoint: `POST url` with an [`EmbedRequest`]
/// body answers with an [`EmbedResponse`]. Use from blocking contexts only.
pub struct HttpEmbedder {
    url: String,
    dimension: usize,
    client: reqwest::blocking::Client,
}

impl HttpEmbedder {
    pub fn new(url: impl Into<String>, dimension: usize, timeout: Duration) -> Result<Self, CoreError> {
        let client = reqwest::blocking::Client::builder().timeout(timeout).build().map_err(|e| CoreError::Embedder(e.to_string()))?;
        Ok(HttpEmbedder { url: url.into(), dimension, client })
    }

    fn call(&self, side: &str, text: &str, context: &str) -> Result<EmbeddingVector, CoreError> {
        let body = EmbedRequest { side: side.into(), text: text.into(), context: context.into() };
        let err = |e: reqwest::Error| CoreError::Embedder(format!("{}: {e}", self.url));
        let resp: EmbedResponse =
            self.client.post(&self.url).json(&body).send().map_err(err)?.error_for_status().map_err(err)?.json().map_err(err)?;
        if resp.vector.len() != self.dimension {
            return Err(CoreError::Embedder(format!("{} returned {} values, expected {}", self.url, resp.vector.len(), self.dimension)));
        }
        Ok(EmbeddingVector(resp.vector))
    }
}

impl Embedder for HttpEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn id(&self) -> String {
        format!("http/{}/d={}", self.url, self.dimension)
    }

    fn embed_question(&self, question: &str) -> Result<EmbeddingVector, CoreError> {
        self.call("question", question, "")
    }

    fn embed_answer(&self, snippet: &str, context: &str) -> Result<EmbeddingVector, CoreError> {
        if snippet.trim().is_empty() {
            return Err(CoreError::EmptyInput("answer snippet"));
        }
        self.call("answer", snippet, context)
    }
}

pub fn make_embedder(config: &EmbedderConfig) -> Result<Arc<dyn Embedder>, CoreError> {
    Ok(match config {
        EmbedderConfig::Hashing { dimension, context_weight } => Arc::new(HashingEmbedder::new(*dimension, *context_weight)),
        EmbedderConfig::Http { url, dimension, timeout_secs } => {
            Arc::new(HttpEmbedder::new(url.clone(), *dimension, Duration::from_secs(*timeout_secs))?)
        }
    })
}
