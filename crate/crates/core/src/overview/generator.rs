use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::archetype::{Archetype, QuestionSet};
use super::candidates::gather_candidates;
use super::cluster::{cluster_answers, PertinentAnswer};
use super::tree::{build_summary_tree, SummaryTree};
use crate::error::{Error, Result};
use crate::kg::KnowledgeGraph;
use crate::nlp::{Embedder, Summarizer};
use crate::taxonomy::{Taxonomy, TaxonomyForest};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OverviewConfig {
    pub pertinence_threshold: f64,
    pub fanout: usize,
    pub summary_budget: usize,
    pub abstract_budget: usize,
    /// Most specific first.
    pub archetype_order: Vec<Archetype>,
    /// Overrides of the embedded question phrasing.
    pub question_texts: BTreeMap<Archetype, String>,
}

impl Default for OverviewConfig {
    fn default() -> Self {
        OverviewConfig {
            pertinence_threshold: 0.55,
            fanout: 3,
            summary_budget: 500,
            abstract_budget: 200,
            archetype_order: Archetype::ALL.to_vec(),
            question_texts: BTreeMap::new(),
        }
    }
}

impl OverviewConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.pertinence_threshold) {
            return Err(Error::Config(format!("pertinence_threshold {} outside [0, 1]", self.pertinence_threshold)));
        }
        if self.fanout < 2 {
            return Err(Error::Config(format!("fanout {} must be at least 2", self.fanout)));
        }
        if self.summary_budget == 0 || self.abstract_budget == 0 {
            return Err(Error::Config("summary budgets must be positive".into()));
        }
        self.questions().map(|_| ())
    }

    pub fn questions(&self) -> Result<QuestionSet> {
        QuestionSet::new(&self.archetype_order, |a| self.question_texts.get(&a).cloned().unwrap_or_else(|| a.default_question_text().to_string()))
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

/// Summary tree per archetype in specificity order; `None` when no answer
/// passed the threshold.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArchetypeTrees(pub Vec<(Archetype, Option<SummaryTree>)>);

impl ArchetypeTrees {
    pub fn get(&self, a: Archetype) -> Option<&SummaryTree> {
        self.0.iter().find(|(x, _)| *x == a).and_then(|(_, t)| t.as_ref())
    }
}

impl Serialize for ArchetypeTrees {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (a, t) in &self.0 {
            map.serialize_entry(a.name(), t)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ArchetypeTrees {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ArchetypeTrees;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from archetype name to summary tree")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((a, t)) = m.next_entry::<Archetype, Option<SummaryTree>>()? {
                    out.push((a, t));
                }
                Ok(ArchetypeTrees(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overview {
    pub concept_uri: String,
    pub label: String,
    pub archetypes: ArchetypeTrees,
    pub superclasses: Vec<String>,
    pub subclasses: Vec<String>,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
}

/// Keeps the first answer of each context paragraph.
fn unique_contexts(answers: &[PertinentAnswer]) -> Vec<PertinentAnswer> {
    let mut seen = std::collections::HashSet::new();
    answers.iter().filter(|a| seen.insert(a.context_paragraph_id)).cloned().collect()
}

/// Generates overviews on demand and memoizes them by (uri, config hash).
pub struct OverviewGenerator {
    kg: Arc<KnowledgeGraph>,
    taxonomy: Arc<Taxonomy>,
    labels: HashMap<String, String>,
    embedder: Arc<dyn Embedder>,
    summarizer: Arc<dyn Summarizer>,
    config: OverviewConfig,
    questions: QuestionSet,
    config_hash: String,
    cache: RwLock<HashMap<(String, String), Arc<Overview>>>,
}

impl OverviewGenerator {
    pub fn new(
        kg: Arc<KnowledgeGraph>,
        forest: &TaxonomyForest,
        embedder: Arc<dyn Embedder>,
        summarizer: Arc<dyn Summarizer>,
        config: OverviewConfig,
    ) -> Result<Self> {
        config.validate()?;
        let taxonomy = Arc::new(Taxonomy::new(&kg, forest));
        let mut labels: HashMap<String, String> =
            forest.trees.iter().flat_map(|t| t.nodes.iter()).map(|n| (n.uri.clone(), n.label.clone())).collect();
        labels.extend(kg.concepts.values().map(|c| (c.uri.clone(), c.label.clone())));
        Ok(OverviewGenerator {
            questions: config.questions()?,
            config_hash: config.hash(),
            kg,
            taxonomy,
            labels,
            embedder,
            summarizer,
            config,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &OverviewConfig {
        &self.config
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn cached_count(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn generate_overview(&self, uri: &str) -> Result<Arc<Overview>> {
        let key = (uri.to_string(), self.config_hash.clone());
        if let Some(o) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(o));
        }
        let overview = Arc::new(self.compute(uri)?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(Arc::clone(cache.entry(key).or_insert(overview)))
    }

    fn compute(&self, uri: &str) -> Result<Overview> {
        if !self.kg.contains(uri) && !self.taxonomy.contains(uri) {
            return Err(Error::MissingConcept(uri.to_string()));
        }
        let candidates = gather_candidates(&self.kg, &self.taxonomy, uri)?;
        let clusters = cluster_answers(&candidates, &self.questions, self.embedder.as_ref(), self.config.pertinence_threshold)?;
        let mut archetypes = Vec::new();
        let mut best: Option<&PertinentAnswer> = None;
        for a in self.questions.order() {
            let answers = clusters.get(&a).map(Vec::as_slice).unwrap_or_default();
            if let Some(top) = answers.first() {
                if best.is_none_or(|b| top.score > b.score) {
                    best = Some(top);
                }
            }
            let tree = build_summary_tree(&unique_contexts(answers), self.summarizer.as_ref(), self.config.fanout, self.config.summary_budget)?;
            archetypes.push((a, tree));
        }
        let abstract_text = match best {
            Some(b) => self.summarizer.summarize(&b.snippet, self.config.abstract_budget),
            None => self
                .kg
                .concept(uri)
                .and_then(|c| c.occurrences.first())
                .and_then(|o| self.kg.corpus.sentence(o.sentence_id))
                .map(|s| self.summarizer.summarize(&s.text, self.config.abstract_budget))
                .unwrap_or_default(),
        };
        Ok(Overview {
            concept_uri: uri.to_string(),
            label: self.labels.get(uri).cloned().unwrap_or_else(|| uri.to_string()),
            archetypes: ArchetypeTrees(archetypes),
            superclasses: self.taxonomy.superclasses(uri).unwrap_or_default(),
            subclasses: self.taxonomy.subclasses(uri).unwrap_or_default(),
            abstract_text,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{build_graph, ingest_corpus, BuildOptions, RawDocument};
    use crate::nlp::{HashingEmbedder, LeadSentenceSummarizer, RuleBasedParser};

    fn generator(text: &str, config: OverviewConfig) -> OverviewGenerator {
        let parser = RuleBasedParser::default();
        let corpus = ingest_corpus(&[RawDocument::new("t", text)], &parser).unwrap();
        let kg = Arc::new(build_graph(corpus, &parser, &BuildOptions::default()).unwrap());
        OverviewGenerator::new(kg, &TaxonomyForest::default(), Arc::new(HashingEmbedder::default()), Arc::new(LeadSentenceSummarizer), config)
            .unwrap()
    }

    const TEXT: &str = "The customer opened a new bank account to save money.\n\nThe bank account was opened because the customer wanted savings.";

    #[test]
    fn overview_has_all_archetype_keys_in_order() {
        let g = generator(TEXT, OverviewConfig { pertinence_threshold: 0.1, ..Default::default() });
        let o = g.generate_overview("ns:account").unwrap();
        let json = serde_json::to_value(&*o).unwrap();
        for key in ["archetypes", "superclasses", "subclasses", "abstract"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let names: Vec<_> = o.archetypes.0.iter().map(|(a, _)| a.name()).collect();
        assert_eq!(names, ["why", "what-for", "how", "who", "where", "when", "what"]);
        assert_eq!(o.subclasses, ["ns:bank_account"]);
        let back: Overview = serde_json::from_slice(&serde_json::to_vec(&*o).unwrap()).unwrap();
        assert_eq!(back, *o);
    }

    #[test]
    fn zero_candidates_gives_empty_archetypes() {
        let g = generator("It rains in Paris. The customer opened a new bank account.", OverviewConfig::default());
        let o = g.generate_overview("ns:paris").unwrap();
        assert!(o.archetypes.0.iter().all(|(_, t)| t.is_none()));
        assert!(matches!(g.generate_overview("ns:zzz"), Err(Error::MissingConcept(_))));
    }

    #[test]
    fn regeneration_is_cached_and_identical() {
        let g = generator(TEXT, OverviewConfig { pertinence_threshold: 0.1, ..Default::default() });
        let a = g.generate_overview("ns:customer").unwrap();
        let b = g.generate_overview("ns:customer").unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        let h = generator(TEXT, OverviewConfig { pertinence_threshold: 0.1, ..Default::default() });
        let c = h.generate_overview("ns:customer").unwrap();
        assert_eq!(serde_json::to_vec(&*a).unwrap(), serde_json::to_vec(&*c).unwrap());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad = OverviewConfig { fanout: 1, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = OverviewConfig { archetype_order: vec![Archetype::Why], ..Default::default() };
        assert!(bad.validate().is_err());
        assert_ne!(OverviewConfig::default().hash(), OverviewConfig { fanout: 4, ..Default::default() }.hash());
    }
}
