use crate::error::{Error, Result};
use crate::nlp::tokenize::tokenize;
use crate::nlp::Lexicon;

pub const DEFAULT_NAMESPACE: &str = "ns:";

/// Mints concept URIs: lowercase, per-token noun lemma, underscore-joined,
/// namespace-prefixed.
#[derive(Debug, Clone)]
pub struct UriMinter {
    namespace: String,
    lexicon: &'static Lexicon,
}

impl Default for UriMinter {
    fn default() -> Self {
        UriMinter::new(DEFAULT_NAMESPACE)
    }
}

impl UriMinter {
    pub fn new(namespace: impl Into<String>) -> Self {
        UriMinter { namespace: namespace.into(), lexicon: Lexicon::english() }
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    /// Normalized key of one token, or `None` when nothing word-like remains.
    pub fn token_key(&self, token: &str) -> Option<String> {
        let cleaned: String = token.to_lowercase().chars().filter(|c| c.is_alphanumeric() || matches!(c, '-' | '.' | '\'')).collect();
        let cleaned = cleaned.trim_matches(|c| matches!(c, '-' | '.' | '\''));
        if !cleaned.chars().any(char::is_alphanumeric) {
            return None;
        }
        Some(self.lexicon.noun_lemma(cleaned))
    }

    /// Lemma keys of a label; accepts a previously minted URI.
    pub fn keys(&self, label: &str) -> Vec<String> {
        let local = label.strip_prefix(self.namespace.as_str()).unwrap_or(label);
        let spaced = local.replace('_', " ");
        tokenize(&spaced).into_iter().filter(|t| t.text != "'s" && t.text != "'").filter_map(|t| self.token_key(&t.text)).collect()
    }

    pub fn mint_uri(&self, label: &str) -> Result<String> {
        let keys = self.keys(label);
        if keys.is_empty() {
            return Err(Error::EmptyInput("concept label"));
        }
        Ok(self.uri_from_keys(&keys))
    }

    pub fn uri_from_keys<S: AsRef<str>>(&self, keys: &[S]) -> String {
        let mut uri = self.namespace.clone();
        for (i, k) in keys.iter().enumerate() {
            if i > 0 {
                uri.push('_');
            }
            uri.push_str(k.as_ref());
        }
        uri
    }

    /// Local part of a URI with underscores turned into spaces.
    pub fn lemma_of(&self, uri: &str) -> String {
        uri.strip_prefix(self.namespace.as_str()).unwrap_or(uri).replace('_', " ")
    }
}
