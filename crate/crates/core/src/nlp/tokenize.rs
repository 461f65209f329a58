//! Word tokenization and sentence splitting. Offsets are in characters
//! (Unicode scalar values), not bytes.

use std::ops::Range;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    /// Whitespace separates this token from the previous one.
    pub space_before: bool,
}

const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "inc", "ltd", "co", "corp", "vs", "etc", "fig", "no", "approx", "dept", "est", "jan", "feb",
    "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
];

const CLITICS: &[&str] = &["'s", "'re", "'ve", "'ll", "'d", "'m"];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits `text` into word and punctuation tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut space_before = false;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            space_before = true;
            i += 1;
            continue;
        }
        let start = i;
        let (text_piece, end) = if is_negation_clitic(&chars, i) {
            (chars[i..i + 3].iter().collect(), i + 3)
        } else if is_word_char(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let d = chars[j];
                if is_word_char(d) {
                    j += 1;
                } else if matches!(d, '-' | '.' | ',' | '&')
                    && j + 1 < chars.len()
                    && is_word_char(chars[j + 1])
                    && internal_joiner_ok(&chars, start, j)
                {
                    j += 2;
                } else {
                    break;
                }
            }
            // don't -> do n't
            if j - start > 1 && is_negation_clitic(&chars, j - 1) {
                j -= 1;
            }
            let mut piece: String = chars[start..j].iter().collect();
            let lower = piece.to_lowercase();
            if chars.get(j) == Some(&'.') && (ABBREVIATIONS.contains(&lower.as_str()) || lower.contains('.')) {
                piece.push('.');
                j += 1;
            }
            (piece, j)
        } else if let Some(len) = clitic_len(&chars, i) {
            (chars[i..i + len].iter().collect(), i + len)
        } else {
            let mut j = i + 1;
            if c == '.' {
                while j < chars.len() && chars[j] == '.' {
                    j += 1;
                }
            }
            (chars[i..j].iter().collect(), j)
        };
        tokens.push(Token { text: text_piece, start, end, space_before });
        space_before = false;
        i = end;
    }
    tokens
}

// Keeps "3.5", "1,000", "e.g", "U.S", "credit-based", "AT&T" as single tokens.
fn internal_joiner_ok(chars: &[char], start: usize, at: usize) -> bool {
    let joiner = chars[at];
    let prev = chars[at - 1];
    let next = chars[at + 1];
    match joiner {
        '-' | '&' => true,
        ',' => prev.is_ascii_digit() && next.is_ascii_digit(),
        '.' => {
            if prev.is_ascii_digit() && next.is_ascii_digit() {
                return true;
            }
            // single letters separated by dots
            let seg_start = chars[start..at].iter().rposition(|c| *c == '.').map_or(start, |p| start + p + 1);
            at - seg_start == 1 && prev.is_alphabetic() && next.is_alphabetic() && chars.get(at + 2).is_none_or(|c| !c.is_alphanumeric())
        }
        _ => false,
    }
}

fn is_negation_clitic(chars: &[char], at: usize) -> bool {
    chars[at].eq_ignore_ascii_case(&'n')
        && chars.get(at + 1).is_some_and(|d| is_apostrophe(*d))
        && chars.get(at + 2).is_some_and(|d| d.eq_ignore_ascii_case(&'t'))
        && chars.get(at + 3).is_none_or(|d| !is_word_char(*d))
        && at > 0
        && is_word_char(chars[at - 1])
}

fn clitic_len(chars: &[char], at: usize) -> Option<usize> {
    if !is_apostrophe(chars[at]) || at == 0 || !is_word_char(chars[at - 1]) {
        return None;
    }
    CLITICS.iter().find_map(|clitic| {
        let len = clitic.chars().count();
        let matches = chars.len() >= at + len && chars[at + 1..at + len].iter().zip(clitic.chars().skip(1)).all(|(a, b)| a.to_ascii_lowercase() == b);
        (matches && chars.get(at + len).is_none_or(|d| !is_word_char(*d))).then_some(len)
    })
}

fn is_terminal(token: &Token) -> bool {
    matches!(token.text.as_str(), "." | "!" | "?" | "..." | "?!" | "!?")
}

fn is_closer(token: &Token) -> bool {
    matches!(token.text.as_str(), "\"" | "'" | ")" | "]" | "\u{201d}" | "\u{2019}")
}

/// Sentence spans (character ranges) of `text`, in reading order.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    let tokens = tokenize(text);
    let mut spans = Vec::new();
    let mut first = 0;
    let mut i = 0;
    while i < tokens.len() {
        if is_terminal(&tokens[i]) {
            let mut last = i;
            while last + 1 < tokens.len() && is_closer(&tokens[last + 1]) && !tokens[last + 1].space_before {
                last += 1;
            }
            let boundary = match tokens.get(last + 1) {
                None => true,
                Some(next) => next.space_before && next.text.chars().next().is_some_and(|c| !c.is_lowercase()),
            };
            if boundary {
                spans.push(tokens[first].start..tokens[last].end);
                first = last + 1;
                i = last + 1;
                continue;
            }
        }
        i += 1;
    }
    if first < tokens.len() {
        spans.push(tokens[first].start..tokens[tokens.len() - 1].end);
    }
    spans
}

/// Substring of `text` between character offsets.
pub fn char_slice(text: &str, range: Range<usize>) -> &str {
    let mut indices = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len()));
    let start = indices.nth(range.start).unwrap_or(text.len());
    let end = if range.end > range.start { indices.nth(range.end - range.start - 1).unwrap_or(text.len()) } else { start };
    &text[start..end]
}

/// Joins token strings, reinserting spaces where the original text had them.
pub fn detokenize<'a>(pieces: impl IntoIterator<Item = (&'a str, bool)>) -> String {
    let mut out = String::new();
    for (piece, space_before) in pieces {
        if !out.is_empty() && space_before {
            out.push(' ');
        }
        out.push_str(piece);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        tokenize(s).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn splits_clitics_and_punctuation() {
        assert_eq!(texts("John's loan."), ["John", "'s", "loan", "."]);
        assert_eq!(texts("I don't know"), ["I", "do", "n't", "know"]);
        assert_eq!(texts("can't"), ["ca", "n't"]);
        assert_eq!(texts("they're here"), ["they", "'re", "here"]);
    }

    #[test]
    fn keeps_numbers_abbreviations_and_hyphens() {
        assert_eq!(texts("a 3.5% rate, e.g. 1,000 credit-based"), ["a", "3.5", "%", "rate", ",", "e.g.", "1,000", "credit-based"]);
        assert_eq!(texts("Mr. Smith"), ["Mr.", "Smith"]);
    }

    #[test]
    fn offsets_are_character_based() {
        let toks = tokenize("café au lait");
        assert_eq!((toks[1].start, toks[1].end), (5, 7));
        assert_eq!(char_slice("café au lait", 5..7), "au");
    }

    #[test]
    fn sentence_boundaries() {
        let text = "A. B. C.";
        let spans: Vec<&str> = split_sentences(text).into_iter().map(|r| char_slice(text, r)).collect();
        assert_eq!(spans, ["A.", "B.", "C."]);

        let text = "Mr. Smith paid 3.5 dollars. Then he left! ok";
        let spans: Vec<&str> = split_sentences(text).into_iter().map(|r| char_slice(text, r)).collect();
        assert_eq!(spans, ["Mr. Smith paid 3.5 dollars.", "Then he left! ok"]);
    }

    #[test]
    fn detokenize_respects_spacing() {
        let toks = tokenize("John's loan, approved.");
        let s = detokenize(toks.iter().map(|t| (t.text.as_str(), t.space_before)));
        assert_eq!(s, "John's loan, approved.");
    }
}
