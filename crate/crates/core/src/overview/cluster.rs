use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::archetype::{ArchetypalQuestion, Archetype, QuestionSet};
use super::candidates::Candidate;
use crate::error::{Error, Result};
use crate::nlp::{inner_product, Embedder, EmbeddingVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PertinentAnswer {
    pub snippet: String,
    pub context_paragraph_id: usize,
    pub context: String,
    pub score: f64,
    pub triple_id: usize,
}

/// Answers per archetype, each list sorted by descending score.
pub type Clusters = BTreeMap<Archetype, Vec<PertinentAnswer>>;

pub fn score_pertinence(q: &ArchetypalQuestion, snippet: &str, context: &str, embedder: &dyn Embedder) -> Result<f64> {
    if snippet.trim().is_empty() {
        return Err(Error::EmptyInput("answer snippet"));
    }
    let question = embedder.embed_question(&q.question_text)?;
    let answer = embedder.embed_answer(snippet, context)?;
    Ok(inner_product(&question, &answer))
}

/// Scores of each candidate against each question, in question-set order.
pub fn score_candidates(candidates: &[Candidate], questions: &QuestionSet, embedder: &dyn Embedder) -> Result<Vec<Vec<f64>>> {
    let qv: Vec<EmbeddingVector> = questions.iter().map(|q| embedder.embed_question(&q.question_text)).collect::<Result<_>>()?;
    candidates
        .iter()
        .map(|c| {
            let a = embedder.embed_answer(&c.snippet, &c.context)?;
            Ok(qv.iter().map(|q| inner_product(q, &a)).collect())
        })
        .collect()
}

/// Assigns each candidate to the most specific archetype whose score reaches
/// `threshold`; candidates below it everywhere are dropped.
pub fn cluster_answers(candidates: &[Candidate], questions: &QuestionSet, embedder: &dyn Embedder, threshold: f64) -> Result<Clusters> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Config(format!("pertinence threshold {threshold} outside [0, 1]")));
    }
    let scores = score_candidates(candidates, questions, embedder)?;
    let mut clusters = Clusters::new();
    for (c, row) in candidates.iter().zip(scores) {
        // questions iterate most specific first
        let Some((q, score)) = questions.iter().zip(row).find(|(_, s)| *s >= threshold) else {
            continue;
        };
        clusters.entry(q.archetype).or_default().push(PertinentAnswer {
            snippet: c.snippet.clone(),
            context_paragraph_id: c.context_paragraph_id,
            context: c.context.clone(),
            score,
            triple_id: c.triple_id,
        });
    }
    for answers in clusters.values_mut() {
        answers.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.triple_id.cmp(&b.triple_id)));
    }
    Ok(clusters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::HashingEmbedder;

    fn cand(snippet: &str, triple_id: usize) -> Candidate {
        Candidate { snippet: snippet.into(), context_paragraph_id: 0, context: snippet.into(), triple_id }
    }

    #[test]
    fn identical_snippet_scores_one() {
        let e = HashingEmbedder::default();
        let qs = QuestionSet::default();
        for q in qs.iter() {
            let s = score_pertinence(q, &q.question_text, &q.question_text, &e).unwrap();
            assert!((s - 1.0).abs() < 1e-9, "{}", q.archetype);
        }
    }

    #[test]
    fn disjoint_vocabulary_scores_near_zero() {
        let e = HashingEmbedder::default();
        let q = QuestionSet::default();
        let s = score_pertinence(q.get(Archetype::Why), "banks charge fees", "banks charge fees", &e).unwrap();
        assert!(s < 0.05);
    }

    #[test]
    fn more_specific_archetype_wins() {
        let e = HashingEmbedder::default();
        let qs = QuestionSet::default();
        // "what for" scores on both what and what-for
        let c = [cand("what for", 0)];
        let s = score_candidates(&c, &qs, &e).unwrap();
        assert!(s[0][1] >= 0.5 && s[0][6] >= 0.5);
        let clusters = cluster_answers(&c, &qs, &e, 0.5).unwrap();
        assert_eq!(clusters.keys().copied().collect::<Vec<_>>(), [Archetype::WhatFor]);
    }

    #[test]
    fn below_threshold_everywhere_is_dropped() {
        let e = HashingEmbedder::default();
        let clusters = cluster_answers(&[cand("banks charge fees", 0)], &QuestionSet::default(), &e, 0.55).unwrap();
        assert!(clusters.is_empty());
        assert!(cluster_answers(&[], &QuestionSet::default(), &e, 1.5).is_err());
    }

    #[test]
    fn equal_scores_keep_triple_order() {
        let e = HashingEmbedder::default();
        let c = [cand("how", 4), cand("how", 2), cand("how how", 9)];
        let clusters = cluster_answers(&c, &QuestionSet::default(), &e, 0.5).unwrap();
        let ids: Vec<_> = clusters[&Archetype::How].iter().map(|a| a.triple_id).collect();
        assert_eq!(ids, [2, 4, 9]);
    }
}
