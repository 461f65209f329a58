use super::tokenize::{char_slice, split_sentences};
use super::Summarizer;

const ELLIPSIS: char = '\u{2026}';

/// Extracts the first sentence, truncated at a word boundary to fit the budget.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeadSentenceSummarizer;

impl Summarizer for LeadSentenceSummarizer {
    fn summarize(&self, text: &str, budget: usize) -> String {
        let Some(first) = split_sentences(text).into_iter().next() else {
            return String::new();
        };
        truncate_to_budget(char_slice(text, first), budget)
    }
}

/// Cuts `text` to at most `budget` characters, preferring a word boundary and
/// marking the cut with an ellipsis.
pub fn truncate_to_budget(text: &str, budget: usize) -> String {
    if text.chars().count() <= budget {
        return text.to_string();
    }
    if budget == 0 {
        return String::new();
    }
    let keep = budget - 1;
    let prefix: String = text.chars().take(keep).collect();
    let at_boundary = text.chars().nth(keep).is_some_and(char::is_whitespace);
    let cut = if at_boundary {
        prefix.trim_end()
    } else {
        match prefix.rfind(char::is_whitespace) {
            Some(pos) => prefix[..pos].trim_end(),
            None => prefix.as_str(),
        }
    };
    let mut out = cut.to_string();
    out.push(ELLIPSIS);
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn first_sentence_is_kept() {
        assert_eq!(LeadSentenceSummarizer.summarize("A. B. C.", 2000), "A.");
        assert_eq!(LeadSentenceSummarizer.summarize("", 10), "");
    }

    #[test]
    fn truncates_at_word_boundary() {
        let s = LeadSentenceSummarizer.summarize("The quick brown fox jumps.", 12);
        assert_eq!(s, "The quick\u{2026}");
        assert_eq!(truncate_to_budget("abcdefgh", 4), "abc\u{2026}");
        assert_eq!(truncate_to_budget("abc", 1), "\u{2026}");
    }

    proptest! {
        #[test]
        fn never_exceeds_budget(text in "[a-zA-Z .,!?]{0,300}", budget in 1usize..200) {
            let out = LeadSentenceSummarizer.summarize(&text, budget);
            prop_assert!(out.chars().count() <= budget);
        }
    }
}
