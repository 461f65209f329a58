use super::{Document, DocumentCorpus, Paragraph, Sentence};
use crate::error::{Error, Result};
use crate::nlp::tokenize::char_slice;
use crate::nlp::DependencyParser;

/// A document as read from disk: plain text or HTML.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub title: String,
    pub content: String,
}

impl RawDocument {
    pub fn new(title: impl Into<String>, content: impl Into<String>) -> Self {
        RawDocument { title: title.into(), content: content.into() }
    }
}

const BLOCK_TAGS: &[&str] = &[
    "p",
    "div",
    "br",
    "li",
    "ul",
    "ol",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "tr",
    "td",
    "th",
    "table",
    "section",
    "article",
    "header",
    "footer",
    "blockquote",
    "pre",
    "dd",
    "dt",
    "dl",
    "hr",
    "main",
    "nav",
    "aside",
    "figure",
    "figcaption",
    "title",
    "body",
    "html",
];
const SKIPPED_TAGS: &[&str] = &["script", "style", "head", "noscript", "template"];

fn looks_like_html(text: &str) -> bool {
    let bytes = text.as_bytes();
    bytes.windows(2).any(|w| w[0] == b'<' && (w[1].is_ascii_alphabetic() || w[1] == b'/' || w[1] == b'!')) && text.contains('>')
}

fn decode_entity(entity: &str) -> Option<char> {
    match entity {
        "amp" => Some('&'),
        "lt" => Some('<'),
        "gt" => Some('>'),
        "quot" => Some('"'),
        "apos" => Some('\''),
        "nbsp" => Some(' '),
        "mdash" => Some('\u{2014}'),
        "ndash" => Some('\u{2013}'),
        "hellip" => Some('\u{2026}'),
        "rsquo" => Some('\u{2019}'),
        "lsquo" => Some('\u{2018}'),
        "rdquo" => Some('\u{201d}'),
        "ldquo" => Some('\u{201c}'),
        _ => {
            let num = entity.strip_prefix('#')?;
            let code = match num.strip_prefix(['x', 'X']) {
                Some(hex) => u32::from_str_radix(hex, 16).ok()?,
                None => num.parse().ok()?,
            };
            char::from_u32(code)
        }
    }
}

/// Converts HTML to text with blank lines between block elements.
pub fn strip_html(html: &str) -> String {
    let mut out = String::with_capacity(html.len());
    let mut rest = html;
    let mut skipping: Option<String> = None;
    while let Some(c) = rest.chars().next() {
        if c == '<' {
            let Some(close) = rest.find('>') else {
                out.push_str(rest);
                break;
            };
            let inner = &rest[1..close];
            rest = &rest[close + 1..];
            if inner.starts_with("!--") && !inner.ends_with("--") {
                rest = rest.find("-->").map_or("", |e| &rest[e + 3..]);
                continue;
            }
            let closing = inner.starts_with('/');
            let name: String =
                inner.trim_start_matches('/').chars().take_while(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
            if let Some(skip) = &skipping {
                if closing && *skip == name {
                    skipping = None;
                }
                continue;
            }
            if !closing && SKIPPED_TAGS.contains(&name.as_str()) && !inner.ends_with('/') {
                skipping = Some(name);
                continue;
            }
            if BLOCK_TAGS.contains(&name.as_str()) {
                out.push_str("\n\n");
            }
            continue;
        }
        rest = &rest[c.len_utf8()..];
        if skipping.is_some() {
            continue;
        }
        if c == '&' {
            if let Some(end) = rest.find(';').filter(|&e| e <= 10) {
                if let Some(decoded) = decode_entity(&rest[..end]) {
                    out.push(decoded);
                    rest = &rest[end + 1..];
                    continue;
                }
            }
        }
        out.push(c);
    }
    out
}

/// Paragraphs of plain text: blank-line separated, internal whitespace collapsed.
fn paragraphs(text: &str) -> Vec<String> {
    let mut result = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let flush = |current: &mut Vec<&str>, result: &mut Vec<String>| {
        let joined = current.iter().flat_map(|l| l.split_whitespace()).collect::<Vec<_>>().join(" ");
        if !joined.is_empty() {
            result.push(joined);
        }
        current.clear();
    };
    for line in text.lines() {
        if line.trim().is_empty() {
            flush(&mut current, &mut result);
        } else {
            current.push(line);
        }
    }
    flush(&mut current, &mut result);
    result
}

/// Splits documents into paragraphs and sentences with ids in reading order.
pub fn ingest_corpus(raw: &[RawDocument], parser: &dyn DependencyParser) -> Result<DocumentCorpus> {
    let mut corpus = DocumentCorpus::default();
    for doc in raw {
        let text = if looks_like_html(&doc.content) { strip_html(&doc.content) } else { doc.content.clone() };
        let paras = paragraphs(&text);
        if paras.is_empty() {
            continue;
        }
        let doc_id = corpus.documents.len();
        let mut paragraph_ids = Vec::with_capacity(paras.len());
        for text in paras {
            let paragraph_id = corpus.paragraphs.len();
            for span in parser.split_sentences(&text) {
                let sentence_text = char_slice(&text, span.clone()).to_string();
                if sentence_text.trim().is_empty() {
                    continue;
                }
                corpus.sentences.push(Sentence {
                    sentence_id: corpus.sentences.len(),
                    paragraph_id,
                    start: span.start,
                    end: span.end,
                    text: sentence_text,
                });
            }
            paragraph_ids.push(paragraph_id);
            corpus.paragraphs.push(Paragraph { paragraph_id, doc_id, text });
        }
        corpus.documents.push(Document { doc_id, title: doc.title.clone(), paragraph_ids });
    }
    if corpus.documents.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(corpus)
}
