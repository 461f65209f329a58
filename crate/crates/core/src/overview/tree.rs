use serde::{Deserialize, Serialize};

use super::cluster::PertinentAnswer;
use crate::error::{Error, Result};
use crate::nlp::Summarizer;

/// Provenance of a leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafAnswer {
    pub snippet: String,
    pub context_paragraph_id: usize,
    pub triple_id: usize,
    pub score: f64,
}

/// Leaves carry an answer context as their summary; internal nodes summarize
/// the concatenation of their children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTree {
    pub summary: String,
    pub children: Vec<SummaryTree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<LeafAnswer>,
}

impl SummaryTree {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaves(&self) -> Vec<&SummaryTree> {
        if self.is_leaf() {
            return vec![self];
        }
        self.children.iter().flat_map(SummaryTree::leaves).collect()
    }

    /// Edges from the root to the deepest leaf.
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }
}

/// Separator used when concatenating children for summarization.
pub const JOIN: &str = " ";

/// Groups consecutive nodes by `k` level by level until one node remains.
/// The root always sits above the leaves, even for a single answer.
pub fn build_summary_tree(answers: &[PertinentAnswer], summarizer: &dyn Summarizer, k: usize, budget: usize) -> Result<Option<SummaryTree>> {
    if k < 2 {
        return Err(Error::Config(format!("fan-out {k} must be at least 2")));
    }
    if answers.is_empty() {
        return Ok(None);
    }
    let mut level: Vec<SummaryTree> = answers
        .iter()
        .map(|a| SummaryTree {
            summary: a.context.clone(),
            children: Vec::new(),
            answer: Some(LeafAnswer {
                snippet: a.snippet.clone(),
                context_paragraph_id: a.context_paragraph_id,
                triple_id: a.triple_id,
                score: a.score,
            }),
        })
        .collect();
    loop {
        let mut parents = Vec::with_capacity(level.len().div_ceil(k));
        let mut it = level.into_iter().peekable();
        while it.peek().is_some() {
            let children: Vec<SummaryTree> = it.by_ref().take(k).collect();
            let text = children.iter().map(|c| c.summary.as_str()).collect::<Vec<_>>().join(JOIN);
            parents.push(SummaryTree { summary: summarizer.summarize(&text, budget), children, answer: None });
        }
        level = parents;
        if level.len() == 1 {
            return Ok(level.pop());
        }
    }
}
