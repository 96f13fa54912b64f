//! Stimulus sets, sequential prefix presentations and the structural classifier.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::registry::{HypothesisSpace, Task};

/// Stimulus numbers always come from the classic domain.
pub const STIMULUS_DOMAIN: u32 = 100;
/// Presentations stop after this many examples.
pub const MAX_PREFIX: usize = 4;

/// The eight classic sets, in presentation order.
pub const TENENBAUM99_SETS: [&[u32]; 8] = [
    &[16],
    &[60],
    &[16, 8, 2, 64],
    &[60, 80, 10, 30],
    &[81, 25, 4, 36],
    &[16, 23, 19, 20],
    &[60, 52, 57, 55],
    &[81, 98, 96, 93],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Category {
    Singleton,
    RuleLike,
    SimilarityLike,
    Other,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Singleton => "singleton",
            Category::RuleLike => "rule-like",
            Category::SimilarityLike => "similarity-like",
            Category::Other => "other",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "singleton" => Category::Singleton,
            "rule-like" => Category::RuleLike,
            "similarity-like" => Category::SimilarityLike,
            "other" => Category::Other,
            _ => return Err(Error::InvalidParameter("unknown stimulus category")),
        })
    }
}

/// Thresholds of the structural classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ClassifierConfig {
    /// A set is rule-like if some rule with support fraction below this contains it.
    pub max_rule_support_fraction: f64,
    /// Otherwise similarity-like if `max - min` is at most this.
    pub max_similarity_spread: u32,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            max_rule_support_fraction: 0.5,
            max_similarity_spread: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StimulusSet {
    pub id: String,
    pub source: Task,
    pub numbers: Vec<u32>,
    pub category: Category,
}

impl StimulusSet {
    /// Validates the numbers and classifies the set against `space`.
    pub fn new(
        id: impl Into<String>,
        source: Task,
        numbers: Vec<u32>,
        space: &HypothesisSpace,
        config: &ClassifierConfig,
    ) -> Result<Self> {
        crate::bayes::validate_examples(&numbers, STIMULUS_DOMAIN)?;
        let category = classify(&numbers, space, config);
        Ok(StimulusSet {
            id: id.into(),
            source,
            numbers,
            category,
        })
    }
}

/// One ordered prefix of a stimulus set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Presentation {
    pub source: Task,
    pub stimulus_id: String,
    /// Prefix length, `1 ..= min(|numbers|, MAX_PREFIX)`.
    pub n: usize,
    pub examples: Vec<u32>,
    /// Size of the full stimulus set.
    pub set_len: usize,
    pub category: Category,
}

impl Presentation {
    /// Whether this is the longest configured prefix of its set.
    pub fn is_full(&self) -> bool {
        self.n == self.set_len.min(MAX_PREFIX)
    }
}

/// Emits prefixes `1 ..= min(|numbers|, max_n)` for every set, in order.
pub fn expand_prefixes(stimuli: &[StimulusSet], max_n: usize) -> Vec<Presentation> {
    stimuli
        .iter()
        .flat_map(|s| {
            (1..=s.numbers.len().min(max_n)).map(move |n| Presentation {
                source: s.source,
                stimulus_id: s.id.clone(),
                n,
                examples: s.numbers[..n].to_vec(),
                set_len: s.numbers.len(),
                category: s.category,
            })
        })
        .collect()
}

/// Structural category of a number set.
///
/// Singleton for one number; rule-like when some rule with support fraction
/// below the threshold contains every number; similarity-like when the spread
/// is small; other otherwise.
pub fn classify(numbers: &[u32], space: &HypothesisSpace, config: &ClassifierConfig) -> Category {
    if numbers.len() == 1 {
        return Category::Singleton;
    }
    let d = space.d() as f64;
    let narrow_rule = space.rules().any(|h| {
        (h.size() as f64 / d) < config.max_rule_support_fraction && h.support.contains_all(numbers)
    });
    if narrow_rule {
        return Category::RuleLike;
    }
    let lo = numbers.iter().min().copied().unwrap_or(0);
    let hi = numbers.iter().max().copied().unwrap_or(0);
    if hi - lo <= config.max_similarity_spread {
        Category::SimilarityLike
    } else {
        Category::Other
    }
}

/// Stable id of an embedded set: its numbers joined by `_`.
pub fn set_id(numbers: &[u32]) -> String {
    numbers
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join("_")
}

/// The embedded Tenenbaum99 sets, classified against `space`.
pub fn tenenbaum99(space: &HypothesisSpace, config: &ClassifierConfig) -> Vec<StimulusSet> {
    TENENBAUM99_SETS
        .iter()
        .map(|numbers| {
            StimulusSet::new(set_id(numbers), Task::Tenenbaum99, numbers.to_vec(), space, config)
                .expect("embedded sets are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{build_space, Domain};
    use alloc::vec;

    fn space() -> HypothesisSpace {
        build_space(Task::Tenenbaum99, Domain::new(100).unwrap()).unwrap()
    }

    #[test]
    fn tenenbaum_expansion() {
        let sets = tenenbaum99(&space(), &ClassifierConfig::default());
        let pres = expand_prefixes(&sets, MAX_PREFIX);
        assert_eq!(pres.len(), 26);
        let count = |c| pres.iter().filter(|p| p.category == c).count();
        assert_eq!(count(Category::Singleton), 2);
        assert_eq!(count(Category::RuleLike), 12);
        assert_eq!(count(Category::SimilarityLike), 12);
        assert_eq!(pres[2].examples, vec![16]);
        assert_eq!(pres[5].examples, vec![16, 8, 2, 64]);
        assert!(pres[5].is_full() && !pres[4].is_full() && pres[0].is_full());
    }

    #[test]
    fn classifier_examples() {
        let (s, cfg) = (space(), ClassifierConfig::default());
        assert_eq!(classify(&[16, 8, 2, 64], &s, &cfg), Category::RuleLike);
        assert_eq!(classify(&[16, 23, 19, 20], &s, &cfg), Category::SimilarityLike);
        assert_eq!(classify(&[41], &s, &cfg), Category::Singleton);
        assert_eq!(classify(&[3, 50, 97], &s, &cfg), Category::Other);
        let tight = ClassifierConfig {
            max_similarity_spread: 15,
            ..cfg
        };
        assert_eq!(classify(&[81, 98, 96, 93], &s, &tight), Category::Other);
    }

    #[test]
    fn singleton_has_one_presentation() {
        let set = StimulusSet::new("x", Task::Bigelow16, vec![41], &space(), &ClassifierConfig::default()).unwrap();
        assert_eq!(expand_prefixes(&[set], 4).len(), 1);
    }

    #[test]
    fn invalid_numbers() {
        let cfg = ClassifierConfig::default();
        assert!(StimulusSet::new("x", Task::Bigelow16, vec![], &space(), &cfg).is_err());
        assert!(StimulusSet::new("x", Task::Bigelow16, vec![101], &space(), &cfg).is_err());
        assert!(StimulusSet::new("x", Task::Bigelow16, vec![3, 3], &space(), &cfg).is_err());
    }
}
