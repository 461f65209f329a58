//! Open-class English lexicon and morphological base-form lookup.
//!
//! The shipped tables are generated by `scripts/build_lexicon.py` from the
//! WordNet 3.0 index files (restricted to frequent words) and WordNet's
//! exception lists. Base-form lookup follows WordNet's detachment rules: a
//! candidate is accepted only when it exists in the inventory for the class.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const DEFAULT_LEMMAS: &str = include_str!("../../data/lemmas.tsv");
const DEFAULT_EXCEPTIONS: &str = include_str!("../../data/exceptions.tsv");

/// Open word classes known to the lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordClass {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl WordClass {
    pub const ALL: [WordClass; 4] = [WordClass::Noun, WordClass::Verb, WordClass::Adj, WordClass::Adv];

    fn slot(self) -> usize {
        self as usize
    }

    fn from_code(code: &str) -> Option<Self> {
        match code {
            "n" => Some(WordClass::Noun),
            "v" => Some(WordClass::Verb),
            "a" | "s" => Some(WordClass::Adj),
            "r" => Some(WordClass::Adv),
            _ => None,
        }
    }
}

const NOUN_RULES: &[(&str, &str)] =
    &[("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y")];

const VERB_RULES: &[(&str, &str)] = &[("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", "")];

const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

// Auxiliary and copular forms; WordNet's exception lists do not cover all of them.
const AUX_FORMS: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("is", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("'s", "be"),
    ("'re", "be"),
    ("'m", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("'ve", "have"),
    ("does", "do"),
    ("did", "do"),
    ("doing", "do"),
    ("done", "do"),
    ("n't", "not"),
    ("ca", "can"),
    ("wo", "will"),
    ("'ll", "will"),
    ("'d", "would"),
];

#[derive(Debug, Clone)]
pub struct Lexicon {
    // Tagged-sense count per class; -1 when the lemma lacks that class.
    entries: HashMap<String, [i32; 4]>,
    exceptions: HashMap<(String, WordClass), String>,
}

impl Lexicon {
    /// The lexicon compiled into the crate.
    pub fn english() -> &'static Lexicon {
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| Lexicon::from_tsv(DEFAULT_LEMMAS, DEFAULT_EXCEPTIONS).expect("bundled lexicon is well-formed"))
    }

    pub fn from_tsv(lemmas: &str, exceptions: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (n, line) in lemmas.lines().enumerate() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 {
                return Err(Error::Format { what: "lemma table", line: n + 1, reason: format!("expected 5 columns, found {}", cols.len()) });
            }
            let mut counts = [-1i32; 4];
            for (slot, col) in counts.iter_mut().zip(&cols[1..]) {
                *slot = col.parse().map_err(|_| Error::Format { what: "lemma table", line: n + 1, reason: format!("bad count {col:?}") })?;
            }
            entries.insert(cols[0].to_string(), counts);
        }
        let mut exc = HashMap::new();
        for (n, line) in exceptions.lines().enumerate() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let class = cols.get(1).and_then(|c| WordClass::from_code(c));
            match (cols.len(), class) {
                (3, Some(class)) => {
                    exc.entry((cols[0].to_string(), class)).or_insert_with(|| cols[2].to_string());
                }
                _ => return Err(Error::Format { what: "exception table", line: n + 1, reason: "expected `form<TAB>pos<TAB>lemma`".into() }),
            }
        }
        Ok(Lexicon { entries, exceptions: exc })
    }

    pub fn has(&self, lemma: &str, class: WordClass) -> bool {
        self.entries.get(lemma).is_some_and(|c| c[class.slot()] >= 0)
    }

    /// Tagged-sense count of `lemma` in `class`, `None` if the lemma lacks the class.
    pub fn tag_count(&self, lemma: &str, class: WordClass) -> Option<u32> {
        self.entries.get(lemma).and_then(|c| u32::try_from(c[class.slot()]).ok())
    }

    /// Base form of `word` (already lowercased) in `class`, if one exists in the inventory.
    pub fn base_form(&self, word: &str, class: WordClass) -> Option<String> {
        if let Some(lemma) = self.exceptions.get(&(word.to_string(), class)) {
            return Some(lemma.clone());
        }
        if self.has(word, class) {
            // a plural that is also a rare noun of its own (banks, glasses)
            // reads as the more frequent singular
            if class == WordClass::Noun {
                let count = |w: &str| self.tag_count(w, class).unwrap_or(0);
                let singular = NOUN_RULES
                    .iter()
                    .filter_map(|(suffix, rep)| word.strip_suffix(suffix).filter(|s| !s.is_empty()).map(|s| format!("{s}{rep}")))
                    .filter(|c| self.has(c, class))
                    .max_by_key(|c| count(c));
                if let Some(c) = singular.filter(|c| count(c) > count(word)) {
                    return Some(c);
                }
            }
            return Some(word.to_string());
        }
        let rules = match class {
            WordClass::Noun => NOUN_RULES,
            WordClass::Verb => VERB_RULES,
            WordClass::Adj => ADJ_RULES,
            WordClass::Adv => return None,
        };
        for (suffix, replacement) in rules {
            if let Some(stem) = word.strip_suffix(suffix) {
                if stem.is_empty() {
                    continue;
                }
                let candidate = format!("{stem}{replacement}");
                if self.has(&candidate, class) {
                    return Some(candidate);
                }
                // stopped -> stop, bigger -> big
                if replacement.is_empty() && class != WordClass::Noun {
                    if let Some(undoubled) = undouble(stem) {
                        if self.has(undoubled, class) {
                            return Some(undoubled.to_string());
                        }
                    }
                }
            }
        }
        None
    }

    /// Classes for which `word` has a base form, with that base form.
    pub fn analyses(&self, word: &str) -> Vec<(WordClass, String)> {
        WordClass::ALL.iter().filter_map(|&class| self.base_form(word, class).map(|b| (class, b))).collect()
    }

    /// Noun lemma used for concept labels: lowercase, base form when the
    /// lexicon knows one, the word itself otherwise. Idempotent.
    pub fn noun_lemma(&self, word: &str) -> String {
        let mut current = word.to_lowercase();
        for _ in 0..4 {
            match self.base_form(&current, WordClass::Noun) {
                Some(next) if next != current => current = next,
                _ => break,
            }
        }
        current
    }

    /// Class-agnostic lemma for bag-of-words use.
    pub fn lemma(&self, word: &str) -> String {
        let lower = word.to_lowercase();
        if let Some((_, base)) = AUX_FORMS.iter().find(|(form, _)| *form == lower) {
            return (*base).to_string();
        }
        if let Some(base) = self.exceptions.get(&(lower.clone(), WordClass::Verb)) {
            return base.clone();
        }
        for class in [WordClass::Noun, WordClass::Verb, WordClass::Adj] {
            if let Some(base) = self.base_form(&lower, class) {
                return base;
            }
        }
        lower
    }

    /// Lemma of `word` read as `class`, falling back to the lowercased word.
    pub fn lemma_as(&self, word: &str, class: WordClass) -> String {
        let lower = word.to_lowercase();
        if let Some((_, base)) = AUX_FORMS.iter().find(|(form, _)| *form == lower) {
            if class == WordClass::Verb {
                return (*base).to_string();
            }
        }
        self.base_form(&lower, class).unwrap_or(lower)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

fn undouble(stem: &str) -> Option<&str> {
    let bytes = stem.as_bytes();
    let n = bytes.len();
    if n >= 3 && bytes[n - 1] == bytes[n - 2] && !b"aeiou".contains(&bytes[n - 1]) {
        Some(&stem[..n - 1])
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plural_nouns_reduce_to_singular() {
        let lex = Lexicon::english();
        assert_eq!(lex.noun_lemma("accounts"), "account");
        assert_eq!(lex.noun_lemma("Inquiries"), "inquiry");
        assert_eq!(lex.noun_lemma("women"), "woman");
        assert_eq!(lex.noun_lemma("bus"), "bus");
        assert_eq!(lex.noun_lemma("qwzx"), "qwzx");
    }

    #[test]
    fn rare_plural_noun_yields_to_frequent_singular() {
        let lex = Lexicon::english();
        assert_eq!(lex.noun_lemma("banks"), "bank");
        assert_eq!(lex.noun_lemma("gas"), "gas");
    }

    #[test]
    fn verb_forms_reduce_to_base() {
        let lex = Lexicon::english();
        assert_eq!(lex.lemma_as("opened", WordClass::Verb), "open");
        assert_eq!(lex.lemma_as("stopped", WordClass::Verb), "stop");
        assert_eq!(lex.lemma_as("lowers", WordClass::Verb), "lower");
        assert_eq!(lex.lemma_as("went", WordClass::Verb), "go");
        assert_eq!(lex.lemma("is"), "be");
    }

    #[test]
    fn noun_lemma_is_idempotent_over_the_inventory() {
        let lex = Lexicon::english();
        for word in lex.words() {
            let once = lex.noun_lemma(word);
            assert_eq!(lex.noun_lemma(&once), once, "{word}");
        }
    }

    #[test]
    fn malformed_table_is_rejected() {
        assert!(Lexicon::from_tsv("dog\t1\t-1\n", "").is_err());
        assert!(Lexicon::from_tsv("", "geese\tq\tgoose\n").is_err());
    }
}
