use std::ops::Range;

use super::uri::UriMinter;
use super::{OBJ, SUBJ};
use crate::nlp::{ParsedToken, Pos};

/// Adjectives that qualify a mention without naming a kind of thing. They stay
/// in the surface span but not in the concept label.
pub const GENERIC_QUALIFIERS: &[&str] = &[
    "new",
    "old",
    "other",
    "same",
    "many",
    "few",
    "several",
    "various",
    "certain",
    "such",
    "own",
    "good",
    "bad",
    "big",
    "small",
    "great",
    "little",
    "large",
    "first",
    "last",
    "next",
    "previous",
    "more",
    "most",
    "less",
    "much",
    "different",
    "whole",
    "entire",
    "main",
    "particular",
    "specific",
    "real",
    "right",
    "wrong",
    "current",
    "recent",
    "possible",
    "able",
    "additional",
    "further",
    "similar",
    "only",
    "whatever",
    "every",
];

/// Surface-span modifiers of a nominal head.
const SPAN_DEPS: &[&str] = &["det", "amod", "compound", "nummod", "advmod", "poss", "predet", "quantmod", "nmod"];

/// A noun-phrase mention inside one parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syntagm {
    /// Exact text of the whole phrase, determiners included.
    pub surface: String,
    /// Text of the label tokens.
    pub label: String,
    pub lemma: String,
    pub uri: String,
    /// Token indices of the surface.
    pub tokens: Range<usize>,
    /// Token indices of the label, a suffix of `tokens`.
    pub content: Range<usize>,
    pub head: usize,
    pub nominal: Vec<bool>,
    /// Character offsets of the surface within the sentence.
    pub start: usize,
    pub end: usize,
}

/// A triple before ids are assigned; endpoints index the syntagm list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleDraft {
    pub subject: usize,
    pub object: usize,
    pub template: String,
}

fn children(tokens: &[ParsedToken]) -> Vec<Vec<usize>> {
    let mut kids = vec![Vec::new(); tokens.len()];
    for t in tokens {
        if !t.is_root() {
            kids[t.head_index].push(t.index);
        }
    }
    kids
}

fn dominated_by(tokens: &[ParsedToken], mut k: usize, head: usize) -> bool {
    for _ in 0..tokens.len() {
        if k == head {
            return true;
        }
        if tokens[k].is_root() {
            return false;
        }
        k = tokens[k].head_index;
    }
    false
}

fn is_label_token(t: &ParsedToken) -> bool {
    match t.pos {
        Pos::Noun | Pos::Propn => matches!(t.dep_label.as_str(), "compound" | "amod" | "nmod"),
        Pos::Adj => t.dep_label == "amod" && !GENERIC_QUALIFIERS.contains(&t.text.to_lowercase().as_str()),
        _ => false,
    }
}

fn span_of(tokens: &[ParsedToken], head: usize, taken: &[bool]) -> (usize, usize) {
    // surface: contiguous left dependents within the head's subtree
    let mut start = head;
    while start > 0 {
        let k = start - 1;
        let t = &tokens[k];
        let allowed = SPAN_DEPS.contains(&t.dep_label.as_str()) && !(t.dep_label == "poss" && t.pos != Pos::Pron) && t.pos != Pos::Punct;
        if taken[k] || !allowed || !dominated_by(tokens, k, head) {
            break;
        }
        start = k;
    }
    // label: contiguous content tokens immediately left of the head
    let mut content = head;
    while content > start && is_label_token(&tokens[content - 1]) && dominated_by(tokens, content - 1, head) {
        content -= 1;
    }
    (start, content)
}

fn make_syntagm(tokens: &[ParsedToken], head: usize, start: usize, content: usize, minter: &UriMinter) -> Option<Syntagm> {
    let label_tokens = &tokens[content..=head];
    let keys: Vec<String> = label_tokens.iter().filter_map(|t| minter.token_key(&t.text)).collect();
    if keys.len() != label_tokens.len() {
        return None;
    }
    let join = |range: &[ParsedToken]| {
        let mut s = String::new();
        for (i, t) in range.iter().enumerate() {
            if i > 0 && t.space_before {
                s.push(' ');
            }
            s.push_str(&t.text);
        }
        s
    };
    Some(Syntagm {
        surface: join(&tokens[start..=head]),
        label: join(label_tokens),
        lemma: keys.join(" "),
        uri: minter.uri_from_keys(&keys),
        tokens: start..head + 1,
        content: content..head + 1,
        head,
        nominal: label_tokens.iter().map(|t| t.pos.is_nominal()).collect(),
        start: tokens[start].start,
        end: tokens[head].end,
    })
}

/// Maximal noun phrases: a nominal head with its contiguous left modifiers.
pub fn extract_syntagms(tokens: &[ParsedToken], minter: &UriMinter) -> Vec<Syntagm> {
    let n = tokens.len();
    let mut taken = vec![false; n];
    let mut found = Vec::new();
    // top nominal heads first, then nominals not absorbed by any label
    let is_top =
        |t: &ParsedToken| !(matches!(t.dep_label.as_str(), "compound" | "nmod") && tokens[t.head_index].pos.is_nominal() && t.head_index > t.index);
    for pass in 0..2 {
        for t in tokens {
            if !t.pos.is_nominal() || taken[t.index] || (pass == 0 && !is_top(t)) {
                continue;
            }
            if pass == 1 && found.iter().any(|s: &Syntagm| s.content.contains(&t.index)) {
                continue;
            }
            let (start, content) = span_of(tokens, t.index, &taken);
            if let Some(s) = make_syntagm(tokens, t.index, start, content, minter) {
                taken[start..=t.index].iter_mut().for_each(|x| *x = true);
                found.push(s);
            }
        }
    }
    found.sort_by_key(|s| s.start);
    found
}

/// Tokens of the subtree rooted at `root`.
fn subtree(kids: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut out = vec![root];
    let mut i = 0;
    while i < out.len() {
        out.extend_from_slice(&kids[out[i]]);
        i += 1;
    }
    out
}

fn ancestors(tokens: &[ParsedToken], mut k: usize) -> Vec<usize> {
    let mut chain = vec![k];
    while !tokens[k].is_root() && chain.len() <= tokens.len() {
        k = tokens[k].head_index;
        chain.push(k);
    }
    chain
}

fn is_subject_label(label: &str) -> bool {
    matches!(label, "nsubj" | "nsubjpass" | "csubj" | "csubjpass")
}

/// One template triple per pair of syntagms with distinct URIs. The template
/// is the connecting dependency path with modifiers that mention no other
/// concept; endpoint phrases become placeholders.
pub fn extract_template_triples(tokens: &[ParsedToken], syntagms: &[Syntagm]) -> Vec<TripleDraft> {
    if syntagms.len() < 2 {
        return Vec::new();
    }
    let n = tokens.len();
    let kids = children(tokens);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, s) in syntagms.iter().enumerate() {
        for k in s.tokens.clone() {
            owner[k] = Some(i);
        }
    }
    let mut out = Vec::new();
    for a in 0..syntagms.len() {
        for b in a + 1..syntagms.len() {
            let (sa, sb) = (&syntagms[a], &syntagms[b]);
            if sa.uri == sb.uri {
                continue;
            }
            let up_a = ancestors(tokens, sa.head);
            let up_b = ancestors(tokens, sb.head);
            let Some(lca) = up_a.iter().copied().find(|x| up_b.contains(x)) else {
                continue;
            };
            let below_a = &up_a[..up_a.iter().position(|&x| x == lca).unwrap_or(0)];
            let below_b = &up_b[..up_b.iter().position(|&x| x == lca).unwrap_or(0)];
            let endpoint = |k: usize| owner[k] == Some(a) || owner[k] == Some(b);

            let mut keep = vec![false; n];
            let path: Vec<usize> = below_a.iter().chain(below_b).copied().chain(std::iter::once(lca)).collect();
            for &x in &path {
                if endpoint(x) {
                    continue;
                }
                keep[x] = true;
                if let Some(o) = owner[x] {
                    syntagms[o].tokens.clone().for_each(|k| keep[k] = true);
                }
                for &c in &kids[x] {
                    if path.contains(&c) || owner[c].is_some() {
                        continue;
                    }
                    let sub = subtree(&kids, c);
                    if sub.iter().all(|&k| owner[k].is_none()) {
                        sub.into_iter().for_each(|k| keep[k] = true);
                    }
                }
            }
            for s in [sa, sb] {
                for &c in &kids[s.head] {
                    if tokens[c].dep_label == "case" && owner[c].is_none() {
                        subtree(&kids, c).into_iter().for_each(|k| keep[k] = true);
                    }
                }
            }

            let a_subj = below_a.iter().any(|&x| is_subject_label(&tokens[x].dep_label));
            let b_subj = below_b.iter().any(|&x| is_subject_label(&tokens[x].dep_label));
            let (subj, obj) = if b_subj && !a_subj { (b, a) } else { (a, b) };

            if let Some(template) = render(tokens, &keep, &syntagms[subj].tokens, &syntagms[obj].tokens) {
                out.push(TripleDraft { subject: subj, object: obj, template });
            }
        }
    }
    out
}

/// Joins kept tokens and placeholders with the sentence's own spacing. A gap
/// left by dropped tokens keeps a space if any dropped token had one, unless
/// it precedes attached punctuation.
fn render(tokens: &[ParsedToken], keep: &[bool], subj: &Range<usize>, obj: &Range<usize>) -> Option<String> {
    let mut out = String::new();
    let mut last: Option<usize> = None;
    let mut k = 0;
    while k < tokens.len() {
        let (piece, next) = if k == subj.start {
            (SUBJ, subj.end)
        } else if k == obj.start {
            (OBJ, obj.end)
        } else if keep[k] && !subj.contains(&k) && !obj.contains(&k) {
            if tokens[k].text.contains(['{', '}']) {
                return None;
            }
            (tokens[k].text.as_str(), k + 1)
        } else {
            k += 1;
            continue;
        };
        if let Some(prev) = last {
            let attached_punct = !tokens[k].space_before && !tokens[k].text.chars().any(char::is_alphanumeric);
            let spaced = !attached_punct && (prev + 1..=k).any(|j| tokens[j].space_before);
            if spaced {
                out.push(' ');
            }
        }
        out.push_str(piece);
        last = Some(next - 1);
        k = next;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::{DependencyParser, RuleBasedParser};

    fn parse(s: &str) -> Vec<ParsedToken> {
        RuleBasedParser::default().parse_sentence(s).unwrap()
    }

    fn lemmas(s: &str) -> Vec<String> {
        extract_syntagms(&parse(s), &UriMinter::default()).into_iter().map(|s| s.lemma).collect()
    }

    #[test]
    fn customer_sentence_syntagms() {
        let syn = extract_syntagms(&parse("the customer opened a new bank account"), &UriMinter::default());
        let got: Vec<_> = syn.iter().map(|s| (s.lemma.as_str(), s.surface.as_str(), s.uri.as_str())).collect();
        assert_eq!(got, [("customer", "the customer", "ns:customer"), ("bank account", "a new bank account", "ns:bank_account")]);
        assert_eq!(syn[1].nominal, [true, true]);
    }

    #[test]
    fn no_nominal_no_syntagm() {
        assert!(lemmas("it rains").is_empty());
    }

    #[test]
    fn possessor_is_its_own_syntagm() {
        assert_eq!(lemmas("John's loan application"), ["john", "loan application"]);
    }

    #[test]
    fn descriptive_adjective_stays_in_label() {
        let syn = extract_syntagms(&parse("A hard credit inquiry lowers your score."), &UriMinter::default());
        assert_eq!(syn[0].lemma, "hard credit inquiry");
        assert_eq!(syn[0].nominal, [false, true, true]);
        assert_eq!(syn[1].surface, "your score");
    }

    #[test]
    fn customer_template() {
        let toks = parse("the customer opened a new bank account");
        let syn = extract_syntagms(&toks, &UriMinter::default());
        let t = extract_template_triples(&toks, &syn);
        assert_eq!(t, [TripleDraft { subject: 0, object: 1, template: "{subj} opened {obj}".into() }]);
    }

    #[test]
    fn hedged_relation_template() {
        let toks =
            parse("Surprisingly the applicable law is considered to be clearly more related to that Member State rather than to something else.");
        let syn = extract_syntagms(&toks, &UriMinter::default());
        assert_eq!(syn.iter().map(|s| s.surface.as_str()).collect::<Vec<_>>(), ["the applicable law", "that Member State"]);
        let t = extract_template_triples(&toks, &syn);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].template, "Surprisingly {subj} is considered to be clearly more related to {obj} rather than to something else.");
    }

    #[test]
    fn passive_subject_takes_subj_even_when_second() {
        let toks = parse("By the lender the loan was approved.");
        let syn = extract_syntagms(&toks, &UriMinter::default());
        let t = extract_template_triples(&toks, &syn);
        assert_eq!(t.len(), 1);
        assert_eq!(syn[t[0].subject].lemma, "loan");
    }

    #[test]
    fn single_syntagm_yields_nothing() {
        let toks = parse("the customer sleeps");
        let syn = extract_syntagms(&toks, &UriMinter::default());
        assert_eq!(syn.len(), 1);
        assert!(extract_template_triples(&toks, &syn).is_empty());
    }

    #[test]
    fn unrelated_branches_with_concepts_are_pruned() {
        let toks = parse("the customer opened a new bank account at the branch");
        let syn = extract_syntagms(&toks, &UriMinter::default());
        let t = extract_template_triples(&toks, &syn);
        let ca = t.iter().find(|d| syn[d.object].lemma == "bank account").unwrap();
        assert_eq!(ca.template, "{subj} opened {obj}");
        let cb = t.iter().find(|d| syn[d.object].lemma == "branch").unwrap();
        assert_eq!(cb.template, "{subj} opened at {obj}");
    }

    #[test]
    fn every_template_has_both_placeholders_once() {
        for s in [
            "When you apply for a loan, the lender checks your credit report and your income.",
            "The bank that issued the card charges an annual fee; customers who pay late lose points.",
            "Payment history is the most important factor in a FICO score.",
        ] {
            let toks = parse(s);
            let syn = extract_syntagms(&toks, &UriMinter::default());
            for d in extract_template_triples(&toks, &syn) {
                assert_eq!(d.template.matches(SUBJ).count(), 1, "{}", d.template);
                assert_eq!(d.template.matches(OBJ).count(), 1, "{}", d.template);
            }
        }
    }
}
