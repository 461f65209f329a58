use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The seven archetypal questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Archetype {
    Why,
    WhatFor,
    How,
    Who,
    Where,
    When,
    What,
}

impl Archetype {
    /// Default order, most specific first.
    pub const ALL: [Archetype; 7] =
        [Archetype::Why, Archetype::WhatFor, Archetype::How, Archetype::Who, Archetype::Where, Archetype::When, Archetype::What];

    pub fn name(self) -> &'static str {
        match self {
            Archetype::Why => "why",
            Archetype::WhatFor => "what-for",
            Archetype::How => "how",
            Archetype::Who => "who",
            Archetype::Where => "where",
            Archetype::When => "when",
            Archetype::What => "what",
        }
    }

    /// Canonical phrasing embedded on the question side.
    pub fn default_question_text(self) -> &'static str {
        match self {
            Archetype::WhatFor => "what for",
            other => other.name(),
        }
    }
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Archetype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_lowercase().replace([' ', '_'], "-");
        Archetype::ALL.into_iter().find(|a| a.name() == norm).ok_or_else(|| Error::Config(format!("unknown archetype {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchetypalQuestion {
    pub archetype: Archetype,
    /// 1 is the most specific.
    pub specificity_rank: usize,
    pub question_text: String,
}

/// Questions in specificity order. Construction checks that the order is a
/// permutation of all seven archetypes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionSet(Vec<ArchetypalQuestion>);

impl Default for QuestionSet {
    fn default() -> Self {
        QuestionSet::new(&Archetype::ALL, |a| a.default_question_text().to_string()).expect("default order is valid")
    }
}

impl QuestionSet {
    pub fn new(order: &[Archetype], text: impl Fn(Archetype) -> String) -> Result<Self> {
        let mut sorted = order.to_vec();
        sorted.sort();
        sorted.dedup();
        if order.len() != 7 || sorted.len() != 7 {
            return Err(Error::Config("archetype order must list each of the seven archetypes once".into()));
        }
        Ok(QuestionSet(
            order.iter().enumerate().map(|(i, &a)| ArchetypalQuestion { archetype: a, specificity_rank: i + 1, question_text: text(a) }).collect(),
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = &ArchetypalQuestion> {
        self.0.iter()
    }

    pub fn order(&self) -> impl Iterator<Item = Archetype> + '_ {
        self.0.iter().map(|q| q.archetype)
    }

    pub fn get(&self, a: Archetype) -> &ArchetypalQuestion {
        self.0.iter().find(|q| q.archetype == a).expect("set holds all archetypes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ranks_follow_specificity() {
        let q = QuestionSet::default();
        let names: Vec<_> = q.iter().map(|q| (q.archetype.name(), q.specificity_rank)).collect();
        assert_eq!(names, [("why", 1), ("what-for", 2), ("how", 3), ("who", 4), ("where", 5), ("when", 6), ("what", 7)]);
        assert_eq!(q.get(Archetype::WhatFor).question_text, "what for");
        assert!(q.get(Archetype::WhatFor).specificity_rank < q.get(Archetype::What).specificity_rank);
    }

    #[test]
    fn order_must_be_a_permutation() {
        assert!(QuestionSet::new(&[Archetype::Why; 7], |a| a.name().into()).is_err());
        assert!(QuestionSet::new(&Archetype::ALL[..6], |a| a.name().into()).is_err());
        let mut rev = Archetype::ALL;
        rev.reverse();
        let q = QuestionSet::new(&rev, |a| a.name().into()).unwrap();
        assert_eq!(q.get(Archetype::What).specificity_rank, 1);
    }

    #[test]
    fn names_parse_back() {
        for a in Archetype::ALL {
            assert_eq!(a.name().parse::<Archetype>().unwrap(), a);
        }
        assert_eq!("what for".parse::<Archetype>().unwrap(), Archetype::WhatFor);
        assert_eq!(serde_json::to_string(&Archetype::WhatFor).unwrap(), "\"what-for\"");
        assert!("whence".parse::<Archetype>().is_err());
    }
}
