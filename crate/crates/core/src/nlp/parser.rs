//! Reference dependency parser.
//!
//! A deterministic rule-based parser: lexicon-driven tagging with local
//! context rules, noun-phrase chunking, then attachment heuristics that emit
//! ClearNLP-style labels (`nsubj`, `dobj`, `prep`, `pobj`, `compound`, ...).
//! It always produces a well-formed tree; accuracy is secondary to
//! determinism.

use super::lexicon::{Lexicon, WordClass};
use super::tokenize::{tokenize, Token};
use super::{DependencyParser, ParsedToken, Pos};
use crate::error::{Error, Result};

const DETERMINERS: &[&str] =
    &["the", "a", "an", "this", "these", "those", "every", "each", "either", "neither", "some", "any", "no", "another", "all", "both"];
const POSSESSIVES: &[&str] = &["my", "your", "his", "her", "its", "our", "their", "whose"];
const PRONOUNS: &[&str] = &[
    "i",
    "you",
    "he",
    "she",
    "it",
    "we",
    "they",
    "me",
    "him",
    "us",
    "them",
    "myself",
    "yourself",
    "himself",
    "herself",
    "itself",
    "ourselves",
    "themselves",
    "mine",
    "yours",
    "hers",
    "ours",
    "theirs",
    "something",
    "anything",
    "nothing",
    "everything",
    "someone",
    "anyone",
    "everyone",
    "nobody",
    "somebody",
    "everybody",
    "who",
    "whom",
    "what",
    "which",
    "one",
];
const SUBJECT_PRONOUNS: &[&str] = &["i", "you", "he", "she", "it", "we", "they"];
const RELATIVES: &[&str] = &["who", "which", "that", "whom"];
const PREPOSITIONS: &[&str] = &[
    "of",
    "in",
    "on",
    "at",
    "to",
    "for",
    "with",
    "by",
    "from",
    "about",
    "into",
    "onto",
    "over",
    "under",
    "between",
    "through",
    "during",
    "without",
    "within",
    "among",
    "against",
    "across",
    "along",
    "around",
    "behind",
    "beyond",
    "toward",
    "towards",
    "upon",
    "via",
    "per",
    "than",
    "as",
    "like",
    "after",
    "before",
    "since",
    "until",
    "despite",
    "including",
    "regarding",
    "concerning",
    "above",
    "below",
    "near",
    "throughout",
    "except",
    "off",
];
const AUXILIARIES: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "'s", "'re", "'m", "have", "has", "had", "having", "'ve", "do", "does", "did", "will",
    "would", "shall", "should", "can", "could", "may", "might", "must", "'ll", "'d", "ca", "wo",
];
const BE_FORMS: &[&str] = &["be", "am", "is", "are", "was", "were", "been", "being", "'s", "'re", "'m"];
const MODALS: &[&str] = &["will", "would", "shall", "should", "can", "could", "may", "might", "must", "'ll", "'d", "ca", "wo", "do", "does", "did"];
const COORDINATORS: &[&str] = &["and", "or", "but", "nor", "plus"];
const SUBORDINATORS: &[&str] = &["because", "although", "though", "while", "whereas", "if", "unless", "whether", "once"];
const WH_ADVERBS: &[&str] = &["when", "where", "why", "how"];
const ADVERBS: &[&str] = &[
    "also",
    "very",
    "too",
    "so",
    "just",
    "only",
    "even",
    "still",
    "already",
    "often",
    "always",
    "never",
    "sometimes",
    "usually",
    "here",
    "now",
    "then",
    "however",
    "therefore",
    "thus",
    "rather",
    "quite",
    "else",
    "again",
    "ever",
    "yet",
    "instead",
    "perhaps",
    "maybe",
    "soon",
    "later",
    "well",
    "almost",
    "not",
    "up",
    "out",
    "down",
    "away",
    "back",
];
const NUMBER_WORDS: &[&str] = &[
    "zero", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve", "twenty", "thirty", "forty", "fifty",
    "sixty", "seventy", "eighty", "ninety", "hundred", "thousand", "million", "billion", "trillion",
];
const ADJ_SUFFIXES: &[&str] = &["ous", "ive", "able", "ible", "al", "ful", "less", "ic", "ary", "ish", "ent", "ant"];

#[derive(Debug, Clone)]
struct Tagged {
    token: Token,
    lower: String,
    pos: Pos,
    lemma: String,
    possessive: bool,
    participle: bool,
    be_form: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct RuleBasedParser {
    lexicon: &'static Lexicon,
}

impl Default for RuleBasedParser {
    fn default() -> Self {
        RuleBasedParser { lexicon: Lexicon::english() }
    }
}

impl DependencyParser for RuleBasedParser {
    fn parse_sentence(&self, text: &str) -> Result<Vec<ParsedToken>> {
        if text.trim().is_empty() {
            return Err(Error::EmptyInput("sentence"));
        }
        let tokens = tokenize(text);
        let tagged = self.tag(tokens);
        let arcs = attach(&tagged);
        Ok(tagged
            .into_iter()
            .zip(arcs)
            .enumerate()
            .map(|(index, (t, (head, label)))| ParsedToken {
                index,
                text: t.token.text,
                lemma: t.lemma,
                pos: t.pos,
                dep_label: label.to_string(),
                head_index: head,
                start: t.token.start,
                end: t.token.end,
                space_before: t.token.space_before,
            })
            .collect())
    }
}

fn contains(list: &[&str], word: &str) -> bool {
    list.contains(&word)
}

impl RuleBasedParser {
    pub fn new(lexicon: &'static Lexicon) -> Self {
        RuleBasedParser { lexicon }
    }

    fn open_classes(&self, lower: &str) -> Vec<(WordClass, String)> {
        self.lexicon.analyses(lower)
    }

    fn count(&self, base: &str, class: WordClass) -> i64 {
        self.lexicon.tag_count(base, class).map_or(-1, i64::from)
    }

    /// Coarse guess for a word used only to look one token ahead.
    fn could_be_noun(&self, tokens: &[Token], i: usize) -> bool {
        let Some(t) = tokens.get(i) else { return false };
        let lower = t.text.to_lowercase();
        if is_closed_class(&lower) || !t.text.chars().any(char::is_alphabetic) {
            return false;
        }
        let classes = self.open_classes(&lower);
        classes.is_empty() || classes.iter().any(|(c, _)| *c == WordClass::Noun) || is_capitalized(&t.text)
    }

    fn could_be_adj(&self, tokens: &[Token], i: usize) -> bool {
        let Some(t) = tokens.get(i) else { return false };
        let lower = t.text.to_lowercase();
        matches!(lower.as_str(), "more" | "most" | "less" | "least")
            || self.open_classes(&lower).iter().any(|(c, _)| matches!(c, WordClass::Adj | WordClass::Adv))
    }

    fn could_be_base_verb(&self, tokens: &[Token], i: usize) -> bool {
        let Some(t) = tokens.get(i) else { return false };
        let lower = t.text.to_lowercase();
        if contains(BE_FORMS, &lower) || lower == "have" || lower == "do" {
            return true;
        }
        if is_closed_class(&lower) {
            return false;
        }
        self.lexicon.has(&lower, WordClass::Verb) && self.count(&lower, WordClass::Verb) >= self.count(&lower, WordClass::Noun).min(1)
    }

    fn tag(&self, tokens: Vec<Token>) -> Vec<Tagged> {
        let mut out: Vec<Tagged> = Vec::with_capacity(tokens.len());
        // clause state: a finite verb was seen; a subordinate clause is open;
        // a relative clause interrupted a subject before its verb
        let mut finite_seen = false;
        let mut subordinate_open = false;
        let mut outer_needs_verb = false;
        for i in 0..tokens.len() {
            let t = &tokens[i];
            let lower = t.text.to_lowercase().replace('\u{2019}', "'");
            let prev = out.last();
            let prev_pos = prev.map(|p| p.pos);
            let mut tagged = Tagged {
                token: t.clone(),
                lower: lower.clone(),
                pos: Pos::X,
                lemma: lower.clone(),
                possessive: false,
                participle: false,
                be_form: false,
            };
            let next_lower = tokens.get(i + 1).map(|n| n.text.to_lowercase());
            let next_lower = next_lower.as_deref();

            let pos = if !t.text.chars().any(char::is_alphanumeric) {
                if matches!(t.text.as_str(), "$" | "%" | "&" | "+" | "=" | "#" | "@" | "\u{20ac}" | "\u{a3}") {
                    Pos::Sym
                } else {
                    Pos::Punct
                }
            } else if t.text.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') || contains(NUMBER_WORDS, &lower) {
                Pos::Num
            } else if lower == "'s" {
                let after_pronoun = prev_pos == Some(Pos::Pron);
                let verbal_next = tokens.get(i + 1).is_some_and(|n| {
                    let nl = n.text.to_lowercase();
                    contains(DETERMINERS, &nl) || contains(PRONOUNS, &nl) || nl.ends_with("ing") || contains(ADVERBS, &nl)
                });
                if after_pronoun || verbal_next {
                    tagged.be_form = true;
                    Pos::Aux
                } else {
                    Pos::Part
                }
            } else if lower == "not" || lower == "n't" {
                Pos::Part
            } else if lower == "to" {
                if self.could_be_base_verb(&tokens, i + 1) && !next_lower.is_some_and(|n| contains(DETERMINERS, n)) {
                    Pos::Part
                } else {
                    Pos::Adp
                }
            } else if lower == "that" {
                if self.could_be_noun(&tokens, i + 1) || self.could_be_adj(&tokens, i + 1) {
                    Pos::Det
                } else if prev_pos.is_some_and(Pos::is_nominal) {
                    Pos::Pron
                } else {
                    Pos::Sconj
                }
            } else if matches!(lower.as_str(), "more" | "most" | "less" | "least") {
                if self.could_be_adj(&tokens, i + 1) {
                    Pos::Adv
                } else {
                    Pos::Adj
                }
            } else if lower == "there" {
                if next_lower.is_some_and(|n| contains(BE_FORMS, n)) {
                    Pos::Pron
                } else {
                    Pos::Adv
                }
            } else if matches!(lower.as_str(), "before" | "after" | "since" | "until") && next_lower.is_some_and(|n| contains(SUBJECT_PRONOUNS, n)) {
                Pos::Sconj
            } else if contains(DETERMINERS, &lower) {
                Pos::Det
            } else if contains(POSSESSIVES, &lower) {
                tagged.possessive = true;
                Pos::Pron
            } else if contains(PRONOUNS, &lower) && !(lower == "one" && self.could_be_noun(&tokens, i + 1)) {
                if lower == "one" {
                    Pos::Num
                } else {
                    Pos::Pron
                }
            } else if lower == "one" {
                Pos::Num
            } else if contains(AUXILIARIES, &lower) {
                // "have"/"do" followed by a noun phrase act as main verbs
                let main_use = matches!(lower.as_str(), "have" | "has" | "had" | "do" | "does" | "did")
                    && tokens.get(i + 1).is_some_and(|n| {
                        let nl = n.text.to_lowercase();
                        contains(DETERMINERS, &nl)
                            || contains(POSSESSIVES, &nl)
                            || (self.could_be_noun(&tokens, i + 1) && !self.lexicon.has(&nl, WordClass::Verb))
                    });
                tagged.be_form = contains(BE_FORMS, &lower);
                if main_use {
                    Pos::Verb
                } else {
                    Pos::Aux
                }
            } else if contains(COORDINATORS, &lower) {
                Pos::Cconj
            } else if contains(SUBORDINATORS, &lower) {
                Pos::Sconj
            } else if contains(WH_ADVERBS, &lower) {
                Pos::Adv
            } else if contains(PREPOSITIONS, &lower) {
                Pos::Adp
            } else if contains(ADVERBS, &lower) {
                Pos::Adv
            } else {
                self.tag_open(&tokens, i, &lower, prev, finite_seen && !outer_needs_verb, &mut tagged)
            };
            tagged.pos = pos;
            tagged.lemma = match pos {
                Pos::Noun => self.lexicon.noun_lemma(&lower),
                Pos::Propn => t.text.clone(),
                Pos::Verb | Pos::Aux => self.lexicon.lemma_as(&lower, WordClass::Verb),
                Pos::Adj => self.lexicon.lemma_as(&lower, WordClass::Adj),
                Pos::Part if lower == "n't" => "not".to_string(),
                _ => lower.clone(),
            };
            if pos == Pos::Verb && tagged.lemma != lower && !lower.ends_with('s') && !lower.ends_with("ing") {
                tagged.participle = true;
            }
            if matches!(pos, Pos::Verb) || (pos == Pos::Aux && !contains(MODALS, &lower)) {
                if finite_seen {
                    outer_needs_verb = false;
                }
                finite_seen = true;
            }
            if pos == Pos::Pron && contains(RELATIVES, &lower) {
                outer_needs_verb |= !finite_seen;
                finite_seen = false;
            } else if pos == Pos::Sconj || (pos == Pos::Adv && contains(WH_ADVERBS, &lower)) {
                subordinate_open = true;
                finite_seen = false;
            } else if pos == Pos::Cconj || matches!(t.text.as_str(), ";" | ":") {
                finite_seen = false;
                outer_needs_verb = false;
            } else if t.text == "," && subordinate_open && finite_seen {
                subordinate_open = false;
                finite_seen = false;
            }
            out.push(tagged);
        }
        out
    }

    fn tag_open(&self, tokens: &[Token], i: usize, lower: &str, prev: Option<&Tagged>, finite_seen: bool, tagged: &mut Tagged) -> Pos {
        let text = &tokens[i].text;
        let analyses = self.open_classes(lower);
        let known = analyses.iter().any(|(c, b)| self.count(b, *c) > 0);
        if is_capitalized(text) && (i > 0 || !known) {
            let after_quote = i > 0 && matches!(tokens[i - 1].text.as_str(), "\"" | "\u{201c}" | "(" | ":");
            if !(after_quote && known) {
                return Pos::Propn;
            }
        }
        // a bare singular noun opening a sentence before a verb or clitic is
        // most likely a name
        if i == 0 && is_capitalized(text) && analyses.iter().all(|(c, b)| *c == WordClass::Noun && b == lower) {
            let next = tokens.get(1).map(|n| n.text.to_lowercase());
            if next.is_some_and(|n| n == "'s" || (n.ends_with('s') && self.lexicon.base_form(&n, WordClass::Verb).is_some_and(|b| b != n))) {
                return Pos::Propn;
            }
        }
        let has = |c: WordClass| analyses.iter().any(|(k, _)| *k == c);
        let count = |c: WordClass| analyses.iter().find(|(k, _)| *k == c).map_or(-1, |(k, b)| self.count(b, *k));
        let ends_ed = lower.ends_with("ed") || lower.ends_with("en");
        let ends_ing = lower.ends_with("ing");
        if analyses.is_empty() {
            return if lower.ends_with("ly") {
                Pos::Adv
            } else if ends_ing || lower.ends_with("ed") {
                if prev.is_some_and(|p| matches!(p.pos, Pos::Det | Pos::Adj) || p.possessive) {
                    Pos::Adj
                } else {
                    Pos::Verb
                }
            } else if ADJ_SUFFIXES.iter().any(|s| lower.ends_with(s)) && self.could_be_noun(tokens, i + 1) {
                Pos::Adj
            } else {
                Pos::Noun
            };
        }
        let prev_pos = prev.map(|p| p.pos);
        let nominal_context =
            prev.is_some_and(|p| matches!(p.pos, Pos::Det | Pos::Adj | Pos::Num) || p.possessive || (p.pos == Pos::Part && p.lower == "'s"));
        let next_nounish = self.could_be_noun(tokens, i + 1);
        if nominal_context {
            if has(WordClass::Noun) && (!next_nounish || count(WordClass::Noun) >= count(WordClass::Adj)) {
                return Pos::Noun;
            }
            if has(WordClass::Adj) {
                return Pos::Adj;
            }
            if has(WordClass::Noun) {
                return Pos::Noun;
            }
            if has(WordClass::Verb) {
                if !finite_seen && !ends_ed && !ends_ing && prev_pos != Some(Pos::Det) {
                    return Pos::Verb;
                }
                return if (ends_ed || ends_ing) && next_nounish { Pos::Adj } else { Pos::Noun };
            }
            return if self.could_be_adj(tokens, i + 1) { Pos::Adv } else { Pos::Noun };
        }
        let after_infinitival = prev.is_some_and(|p| (p.pos == Pos::Part && p.lower == "to") || (p.pos == Pos::Aux && contains(MODALS, &p.lower)));
        if after_infinitival && has(WordClass::Verb) {
            return Pos::Verb;
        }
        let after_be_or_have = prev.is_some_and(|p| p.pos == Pos::Aux && !contains(MODALS, &p.lower))
            || (prev_pos == Some(Pos::Adv) && i >= 2 && self.recent_aux(tokens, i));
        if after_be_or_have {
            if has(WordClass::Verb) && (ends_ed || ends_ing || self.lexicon.base_form(lower, WordClass::Verb).is_some_and(|b| b != lower)) {
                return Pos::Verb;
            }
            if has(WordClass::Adj) {
                return Pos::Adj;
            }
            if has(WordClass::Noun) {
                return Pos::Noun;
            }
        }
        let subject_before =
            prev.is_some_and(|p| p.pos.is_nominal() || (p.pos == Pos::Pron && !p.possessive) || (p.pos == Pos::Adv && lower.ends_with('s')));
        if subject_before && !finite_seen && has(WordClass::Verb) {
            let next_closed_or_end = tokens.get(i + 1).is_none_or(|n| {
                let nl = n.text.to_lowercase();
                is_closed_class(&nl) || !n.text.chars().any(char::is_alphanumeric)
            });
            let noun_possible = has(WordClass::Noun) && count(WordClass::Noun) > 0;
            if !noun_possible || next_closed_or_end || !next_nounish {
                tagged.participle = ends_ed;
                return Pos::Verb;
            }
        }
        if finite_seen && has(WordClass::Noun) && prev_pos.is_some_and(Pos::is_nominal) {
            return Pos::Noun;
        }
        if prev_pos == Some(Pos::Verb) || prev_pos == Some(Pos::Adp) {
            if has(WordClass::Noun) && !(has(WordClass::Adj) && next_nounish && count(WordClass::Adj) > count(WordClass::Noun)) {
                return Pos::Noun;
            }
            if has(WordClass::Adj) {
                return Pos::Adj;
            }
        }
        if lower.ends_with("ly") && has(WordClass::Adv) {
            return Pos::Adv;
        }
        // highest tagged-sense count; ties prefer noun, verb, adjective, adverb
        let mut best = (WordClass::Noun, -2i64);
        for class in WordClass::ALL {
            let c = count(class);
            if c > best.1 {
                best = (class, c);
            }
        }
        match best.0 {
            WordClass::Noun => Pos::Noun,
            WordClass::Verb => {
                if has(WordClass::Noun) && next_nounish && !finite_seen && prev_pos.is_none() {
                    Pos::Noun
                } else {
                    Pos::Verb
                }
            }
            WordClass::Adj => Pos::Adj,
            WordClass::Adv => Pos::Adv,
        }
    }

    fn recent_aux(&self, tokens: &[Token], i: usize) -> bool {
        tokens[..i]
            .iter()
            .rev()
            .take_while(|t| {
                let l = t.text.to_lowercase();
                contains(ADVERBS, &l)
                    || l.ends_with("ly")
                    || matches!(l.as_str(), "more" | "most" | "less" | "not" | "n't")
                    || contains(AUXILIARIES, &l)
            })
            .any(|t| {
                let l = t.text.to_lowercase();
                contains(AUXILIARIES, &l) && !contains(MODALS, &l)
            })
    }
}

fn is_capitalized(text: &str) -> bool {
    text.chars().next().is_some_and(char::is_uppercase)
}

fn is_closed_class(lower: &str) -> bool {
    [DETERMINERS, POSSESSIVES, PRONOUNS, PREPOSITIONS, AUXILIARIES, COORDINATORS, SUBORDINATORS, WH_ADVERBS, ADVERBS]
        .iter()
        .any(|list| contains(list, lower))
        || matches!(lower, "to" | "that" | "'s" | "n't")
}

#[derive(Debug, Clone, Copy)]
struct Phrase {
    start: usize,
    head: usize,
}

/// Computes (head, label) for every token.
fn attach(t: &[Tagged]) -> Vec<(usize, &'static str)> {
    let n = t.len();
    let mut arcs = Arcs { head: vec![None; n], label: vec!["dep"; n] };
    // noun phrases
    let mut phrases: Vec<Phrase> = Vec::new();
    let mut phrase_of: Vec<Option<usize>> = vec![None; n];
    let mut i = 0;
    while i < n {
        let starts = matches!(t[i].pos, Pos::Det | Pos::Adj | Pos::Num | Pos::Noun | Pos::Propn)
            || (t[i].pos == Pos::Pron && t[i].possessive)
            || (t[i].pos == Pos::Adv && i + 1 < n && t[i + 1].pos == Pos::Adj);
        if !starts {
            if t[i].pos == Pos::Pron {
                phrase_of[i] = Some(phrases.len());
                phrases.push(Phrase { start: i, head: i });
            }
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < n
            && (matches!(t[j].pos, Pos::Adj | Pos::Num | Pos::Noun | Pos::Propn) || (t[j].pos == Pos::Adv && j + 1 < n && t[j + 1].pos == Pos::Adj))
        {
            j += 1;
        }
        let nominal_head = (i..j).rev().find(|&k| t[k].pos.is_nominal());
        let head_idx = nominal_head.or_else(|| (i..j).rev().find(|&k| t[k].pos == Pos::Num));
        match head_idx {
            Some(h) => {
                let id = phrases.len();
                phrase_of[i..=h].fill(Some(id));
                for (k, tok) in t.iter().enumerate().take(h).skip(i) {
                    let l = match tok.pos {
                        Pos::Det => "det",
                        Pos::Pron => "poss",
                        Pos::Adj => "amod",
                        Pos::Num => "nummod",
                        Pos::Noun | Pos::Propn => "compound",
                        Pos::Adv => "advmod",
                        _ => "dep",
                    };
                    let target = if t[k].pos == Pos::Adv { k + 1 } else { h };
                    arcs.set(k, target, l);
                }
                phrases.push(Phrase { start: i, head: h });
                i = h + 1;
            }
            None => i = j.max(i + 1),
        }
    }

    // possessive clitic: NP1 's NP2
    for (p, phrase) in phrases.iter().enumerate() {
        let after = phrase.head + 1;
        if after < n && t[after].pos == Pos::Part && t[after].lower == "'s" {
            arcs.set(after, phrase.head, "case");
            if let Some(next) = phrases.get(p + 1) {
                if next.start == after + 1 {
                    arcs.set(phrase.head, next.head, "poss");
                }
            }
        }
    }

    // predicates: main verbs, plus auxiliaries that govern no verb (copulas)
    let mut predicates: Vec<usize> = Vec::new();
    for k in 0..n {
        match t[k].pos {
            Pos::Verb => predicates.push(k),
            Pos::Aux => match governed_verb(t, k) {
                Some(v) => {
                    let l = if t[k].be_form && t[v].participle { "auxpass" } else { "aux" };
                    arcs.set(k, v, l);
                }
                None => predicates.push(k),
            },
            _ => {}
        }
    }
    predicates.sort_unstable();

    // clause role of each predicate
    #[derive(Clone, Copy, PartialEq)]
    enum Role {
        Main,
        Xcomp,
        Advcl,
        Relcl(usize),
        Conj,
    }
    let group_start = |arcs: &Arcs, p: usize| group_start(t, arcs, p);
    let mut roles = Vec::with_capacity(predicates.len());
    for (idx, &p) in predicates.iter().enumerate() {
        let s = group_start(&arcs, p);
        let lower_bound = if idx == 0 { 0 } else { predicates[idx - 1] + 1 };
        let has_to = (s..p).any(|k| t[k].pos == Pos::Part && t[k].lower == "to");
        let mut role = Role::Main;
        if has_to && idx > 0 {
            role = Role::Xcomp;
        } else {
            for k in (lower_bound..s).rev() {
                let tk = &t[k];
                if tk.pos == Pos::Sconj
                    || (tk.pos == Pos::Adv && contains(WH_ADVERBS, &tk.lower))
                    || (tk.pos == Pos::Adp
                        && matches!(tk.lower.as_str(), "before" | "after" | "since" | "until")
                        && k + 1 < n
                        && t[k + 1].pos == Pos::Pron)
                {
                    role = Role::Advcl;
                    break;
                }
                if tk.pos == Pos::Pron && contains(RELATIVES, &tk.lower) && k > 0 {
                    let antecedent = (0..k).rev().find(|&a| t[a].pos.is_nominal() || t[a].pos == Pos::Pron);
                    if let Some(a) = antecedent.filter(|&a| k - a <= 1 || t[k - 1].pos == Pos::Punct) {
                        role = Role::Relcl(a);
                        break;
                    }
                }
                if tk.pos == Pos::Cconj && idx > 0 {
                    role = Role::Conj;
                    break;
                }
                if tk.pos == Pos::Punct && matches!(tk.token.text.as_str(), ";" | ":") && idx > 0 {
                    role = Role::Conj;
                    break;
                }
                if tk.pos.is_nominal() || tk.pos == Pos::Pron {
                    // a subject intervenes; keep scanning for a clause marker
                    continue;
                }
            }
        }
        roles.push(role);
    }
    let root = predicates
        .iter()
        .zip(&roles)
        .find(|(_, r)| **r == Role::Main)
        .map(|(p, _)| *p)
        .or_else(|| predicates.first().copied())
        .or_else(|| phrases.first().map(|p| p.head))
        .or_else(|| (0..n).find(|&k| t[k].pos != Pos::Punct))
        .unwrap_or(0);
    for (idx, &p) in predicates.iter().enumerate() {
        if p == root {
            continue;
        }
        let prev_pred = predicates[..idx].iter().rev().copied().find(|&q| q != p);
        match roles[idx] {
            Role::Xcomp => arcs.set(p, prev_pred.unwrap_or(root), "xcomp"),
            Role::Advcl => arcs.set(p, root, "advcl"),
            Role::Relcl(a) if a != p => arcs.set(p, a, "relcl"),
            Role::Conj => arcs.set(p, prev_pred.unwrap_or(root), if p < root { "advcl" } else { "conj" }),
            Role::Main | Role::Relcl(_) => arcs.set(p, root, if p < root { "advcl" } else { "conj" }),
        }
    }
    let is_pred = |k: usize| predicates.binary_search(&k).is_ok();
    let nearest_pred_before = |k: usize| predicates.iter().rev().copied().find(|&p| p < k);
    let nearest_pred_after = |k: usize| predicates.iter().copied().find(|&p| p > k);
    let passive = |arcs: &Arcs, p: usize| t[p].participle && (0..p).rev().take(4).any(|a| t[a].be_form && arcs.head[a] == Some(p));

    // noun phrase roles
    for (pi, phrase) in phrases.iter().enumerate() {
        let h = phrase.head;
        if arcs.head[h].is_some() || h == root {
            continue;
        }
        let before = phrase.start.checked_sub(1);
        // coordination: NP and NP
        if let Some(b) = before {
            if t[b].pos == Pos::Cconj && pi > 0 && phrases[pi - 1].head + 1 == b {
                let first = phrases[pi - 1].head;
                arcs.set(h, first, "conj");
                arcs.set(b, first, "cc");
                continue;
            }
            if t[b].pos == Pos::Adp {
                arcs.set(h, b, "pobj");
                continue;
            }
        }
        // subject: phrase directly followed by its predicate group, unless it
        // is the object of a relative clause
        let object_of_relcl = before.and_then(|b| predicates.iter().position(|&p| p == b)).is_some_and(|i| matches!(roles[i], Role::Relcl(_)));
        let after_phrase = (h + 1..n).find(|&k| t[k].pos != Pos::Adv);
        let next_pred = nearest_pred_after(h);
        if let (Some(a), Some(p), false) = (after_phrase, next_pred, object_of_relcl) {
            let infinitive = predicates.iter().position(|&q| q == p).is_some_and(|i| roles[i] == Role::Xcomp);
            if group_start(&arcs, p) <= a && a <= p && !infinitive {
                arcs.set(h, p, if passive(&arcs, p) { "nsubjpass" } else { "nsubj" });
                continue;
            }
        }
        // subject interrupted by a relative clause
        if h + 1 < n && t[h + 1].pos == Pos::Pron && contains(RELATIVES, &t[h + 1].lower) {
            let outer = predicates.iter().zip(&roles).find(|(p, r)| **p > h + 1 && matches!(r, Role::Main | Role::Conj)).map(|(p, _)| *p);
            if let Some(p) = outer {
                arcs.set(h, p, if passive(&arcs, p) { "nsubjpass" } else { "nsubj" });
                continue;
            }
        }
        // object: phrase right after a predicate (or after its first object)
        if let Some(b) = before {
            let mut k = b;
            while k > 0 && matches!(t[k].pos, Pos::Adv | Pos::Part) && !is_pred(k) {
                k -= 1;
            }
            if is_pred(k) {
                let l = if t[k].pos == Pos::Aux { "attr" } else { "dobj" };
                arcs.set(h, k, l);
                continue;
            }
            if pi > 0 && phrases[pi - 1].head + 1 == phrase.start {
                if let Some(&(prev_head_target, "dobj")) =
                    arcs.head[phrases[pi - 1].head].as_ref().map(|x| (*x, arcs.label[phrases[pi - 1].head])).as_ref()
                {
                    arcs.set(h, prev_head_target, "dobj");
                    continue;
                }
            }
            if t[b].lower == "," && pi > 0 && phrases[pi - 1].head + 1 == b {
                arcs.set(h, phrases[pi - 1].head, "appos");
                continue;
            }
        }
        if let Some(p) = nearest_pred_before(h).or(next_pred) {
            arcs.set(h, p, "npadvmod");
        } else if h != root {
            arcs.set(h, root, "dep");
        }
    }

    // remaining tokens
    for k in 0..n {
        if arcs.head[k].is_some() || k == root {
            continue;
        }
        let tk = &t[k];
        match tk.pos {
            Pos::Adp => {
                let prev_phrase_head = (k > 0 && phrase_of[k - 1].is_some()).then(|| phrases[phrase_of[k - 1].unwrap()].head);
                let target = if tk.lower == "of" {
                    prev_phrase_head.or_else(|| nearest_pred_before(k))
                } else {
                    nearest_pred_before(k).or(prev_phrase_head).or_else(|| nearest_pred_after(k))
                };
                arcs.set(k, target.unwrap_or(root), "prep");
            }
            Pos::Part => {
                if tk.lower == "to" {
                    arcs.set(k, nearest_pred_after(k).unwrap_or(root), "aux");
                } else if tk.lower == "not" || tk.lower == "n't" {
                    let target = nearest_pred_after(k).filter(|&p| group_start(&arcs, p) <= k).or_else(|| nearest_pred_before(k));
                    arcs.set(k, target.unwrap_or(root), "neg");
                } else {
                    arcs.set(k, root, "dep");
                }
            }
            Pos::Sconj => arcs.set(k, nearest_pred_after(k).unwrap_or(root), "mark"),
            Pos::Cconj => {
                let target =
                    (k + 1..n).find(|&j| is_pred(j) || phrase_of[j].is_some()).map(
                        |j| {
                            if is_pred(j) {
                                j
                            } else {
                                phrases[phrase_of[j].unwrap()].head
                            }
                        },
                    );
                let target = target.and_then(|j| arcs.head[j].filter(|_| matches!(arcs.label[j], "conj")).or(Some(j)));
                arcs.set(k, target.filter(|&j| j != k).unwrap_or(root), "cc");
            }
            Pos::Adv => {
                let target = if k + 1 < n && matches!(t[k + 1].pos, Pos::Adj | Pos::Adv) && !contains(WH_ADVERBS, &tk.lower) {
                    Some(k + 1)
                } else if tk.lower == "else" && k > 0 && t[k - 1].pos == Pos::Pron {
                    Some(k - 1)
                } else if contains(WH_ADVERBS, &tk.lower) {
                    nearest_pred_after(k)
                } else {
                    let before = nearest_pred_before(k);
                    let after = nearest_pred_after(k);
                    match (before, after) {
                        (None, Some(a)) => Some(a),
                        (Some(b), Some(a)) if group_start(&arcs, a) <= k + 1 => {
                            if (k + 1..a).all(|j| matches!(t[j].pos, Pos::Aux | Pos::Adv | Pos::Part)) {
                                Some(a)
                            } else {
                                Some(b)
                            }
                        }
                        (Some(b), _) => Some(b),
                        (None, None) => None,
                    }
                };
                arcs.set(k, target.unwrap_or(root), "advmod");
            }
            Pos::Adj => {
                let copula_before = nearest_pred_before(k)
                    .filter(|&p| t[p].pos == Pos::Aux || t[p].lemma == "become" || t[p].lemma == "seem" || t[p].lemma == "remain");
                let prev_phrase = (0..k).rev().find_map(|j| phrase_of[j]).map(|p| phrases[p].head);
                let target = copula_before.map(|p| (p, "acomp")).or_else(|| prev_phrase.map(|p| (p, "amod")));
                let (target, l) = target.unwrap_or((root, "dep"));
                arcs.set(k, target, l);
            }
            Pos::Punct => arcs.set(k, root, "punct"),
            Pos::Aux => arcs.set(k, root, "aux"),
            _ => arcs.set(k, root, "dep"),
        }
    }

    // repair: anything unattached or caught in a cycle hangs from the root
    arcs.head[root] = Some(root);
    arcs.label[root] = "ROOT";
    for k in 0..n {
        if arcs.head[k].is_none() {
            arcs.head[k] = Some(root);
            arcs.label[k] = "dep";
        }
    }
    for k in 0..n {
        let mut cur = k;
        let mut steps = 0;
        while cur != root && steps <= n {
            cur = arcs.head[cur].unwrap_or(root);
            steps += 1;
        }
        if cur != root {
            arcs.head[k] = Some(root);
            arcs.label[k] = "dep";
        }
    }
    arcs.head.into_iter().map(|h| h.unwrap_or(root)).zip(arcs.label).collect()
}

struct Arcs {
    head: Vec<Option<usize>>,
    label: Vec<&'static str>,
}

impl Arcs {
    fn set(&mut self, i: usize, h: usize, l: &'static str) {
        if self.head[i].is_none() && i != h {
            self.head[i] = Some(h);
            self.label[i] = l;
        }
    }
}

/// Start of the verb group ending at predicate `p`.
fn group_start(t: &[Tagged], arcs: &Arcs, p: usize) -> usize {
    let mut s = p;
    while s > 0
        && (matches!(t[s - 1].pos, Pos::Aux | Pos::Part) || (t[s - 1].pos == Pos::Adv && !contains(WH_ADVERBS, &t[s - 1].lower)))
        && arcs.head[s - 1].is_none_or(|h| h == p)
    {
        if t[s - 1].pos == Pos::Part && t[s - 1].lower == "'s" {
            break;
        }
        s -= 1;
    }
    s
}

/// The main verb governed by auxiliary `k`, skipping adverbs, negation and
/// infinitival `to`.
fn governed_verb(t: &[Tagged], k: usize) -> Option<usize> {
    let mut j = k + 1;
    while j < t.len() {
        match t[j].pos {
            Pos::Verb => return Some(j),
            Pos::Aux if !contains(MODALS, &t[j].lower) || t[j].lower == "be" || contains(MODALS, &t[k].lower) => {
                j += 1;
            }
            Pos::Adv | Pos::Part => j += 1,
            _ => return None,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::is_valid_tree;

    fn parse(s: &str) -> Vec<ParsedToken> {
        RuleBasedParser::default().parse_sentence(s).unwrap()
    }

    fn arcs(tokens: &[ParsedToken]) -> Vec<(String, String, String)> {
        tokens.iter().map(|t| (t.text.clone(), t.dep_label.clone(), tokens[t.head_index].text.clone())).collect()
    }

    fn arc(text: &str, dep: &str, head: &str) -> (String, String, String) {
        (text.into(), dep.into(), head.into())
    }

    #[test]
    fn john_sleeps() {
        let toks = parse("John sleeps");
        assert_eq!(arcs(&toks), [arc("John", "nsubj", "sleeps"), arc("sleeps", "ROOT", "sleeps")]);
        assert_eq!(toks[0].pos, Pos::Propn);
        assert_eq!(toks[1].pos, Pos::Verb);
        assert_eq!(toks[1].lemma, "sleep");
    }

    #[test]
    fn customer_opened_account() {
        let toks = parse("the customer opened a new bank account");
        assert_eq!(
            arcs(&toks),
            [
                arc("the", "det", "customer"),
                arc("customer", "nsubj", "opened"),
                arc("opened", "ROOT", "opened"),
                arc("a", "det", "account"),
                arc("new", "amod", "account"),
                arc("bank", "compound", "account"),
                arc("account", "dobj", "opened"),
            ]
        );
    }

    #[test]
    fn possessive_phrase() {
        let toks = parse("John's loan application was denied.");
        let a = arcs(&toks);
        assert!(a.contains(&arc("John", "poss", "application")));
        assert!(a.contains(&arc("'s", "case", "John")));
        assert!(a.contains(&arc("loan", "compound", "application")));
        assert!(a.contains(&arc("application", "nsubjpass", "denied")));
    }

    #[test]
    fn empty_sentence_is_an_error() {
        assert!(matches!(RuleBasedParser::default().parse_sentence("  "), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn parsing_is_deterministic() {
        let s = "Surprisingly the applicable law is considered to be clearly more related to that Member State rather than to something else.";
        assert_eq!(parse(s), parse(s));
        assert!(is_valid_tree(&parse(s)));
    }

    #[test]
    fn trees_are_well_formed_on_varied_input() {
        for s in [
            "it rains",
            "When you apply for a loan, the lender checks your credit report and your income.",
            "The bank that issued the card charges an annual fee; customers who pay late lose points.",
            "Payment history is the most important factor in a FICO score.",
            "Don't close old accounts, because they lengthen your credit history!",
            "A hard inquiry lowers your score by a few points.",
            ", , ;",
            "and or but",
            "1 2 3",
        ] {
            let toks = parse(s);
            assert!(is_valid_tree(&toks), "{s}: {:?}", arcs(&toks));
        }
    }
}
