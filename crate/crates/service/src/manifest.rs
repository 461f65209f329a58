use std::path::{Path, PathBuf};

use espace_core::kg::{strip_html, RawDocument};
use sha2::{Digest, Sha256};

use crate::error::{io_err, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub title: String,
}

/// Parses `path<TAB>title` lines; the title defaults to the file stem and
/// relative paths resolve against `base`. Blank lines and `#` comments are
/// skipped.
pub fn parse_manifest(text: &str, base: &Path) -> Vec<ManifestEntry> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (path, title) = line.split_once('\t').unwrap_or((line, ""));
            let path = PathBuf::from(path.trim());
            let title = match title.trim() {
                "" => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                t => t.to_string(),
            };
            ManifestEntry { path: if path.is_relative() { base.join(path) } else { path }, title }
        })
        .collect()
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(parse_manifest(&text, path.parent().unwrap_or(Path::new("."))))
}

fn is_html(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(), Some("html" | "htm" | "xhtml"))
}

/// Reads every listed document; unreadable files become warnings.
pub fn load_documents(entries: &[ManifestEntry]) -> (Vec<RawDocument>, Vec<String>) {
    let mut docs = Vec::new();
    let mut warnings = Vec::new();
    for e in entries {
        match std::fs::read_to_string(&e.path) {
            Ok(text) => {
                let content = if is_html(&e.path) { strip_html(&text) } else { text };
                docs.push(RawDocument::new(e.title.clone(), content));
            }
            Err(err) => warnings.push(format!("skipped {}: {err}", e.path.display())),
        }
    }
    (docs, warnings)
}

/// Hash of titles and contents in manifest order.
pub fn corpus_hash(docs: &[RawDocument]) -> String {
    let mut h = Sha256::new();
    for d in docs {
        for part in [d.title.as_bytes(), d.content.as_bytes()] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part);
        }
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lines() {
        let m = parse_manifest("# c\n\na.txt\tFirst\n/abs/b.html\n", Path::new("/base"));
        assert_eq!(
            m,
            [ManifestEntry { path: "/base/a.txt".into(), title: "First".into() }, ManifestEntry { path: "/abs/b.html".into(), title: "b".into() },]
        );
    }

    #[test]
    fn unreadable_files_warn() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.html"), "<p>Banks lend money.</p><script>x</script>").unwrap();
        let entries = parse_manifest("a.html\nmissing.txt\n", dir.path());
        let (docs, warnings) = load_documents(&entries);
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].content.trim(), "Banks lend money.");
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("missing.txt"));
    }

    #[test]
    fn corpus_hash_depends_on_boundaries() {
        let a = [RawDocument::new("ab", "c")];
        let b = [RawDocument::new("a", "bc")];
        assert_ne!(corpus_hash(&a), corpus_hash(&b));
        assert_eq!(corpus_hash(&a), corpus_hash(&a));
    }
}
