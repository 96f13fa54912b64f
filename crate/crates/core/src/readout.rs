//! Behavioral readouts in normalized form: yes-probability curves and
//! weighted hypothesis labels.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::registry::{parse_label, CandidateList, HypothesisKind, OTHER_LABEL};
use crate::Support;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Measurement {
    Prediction,
    Evaluation,
    Generation,
}

impl Measurement {
    pub fn as_str(self) -> &'static str {
        match self {
            Measurement::Prediction => "prediction",
            Measurement::Evaluation => "evaluation",
            Measurement::Generation => "generation",
        }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measurement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "prediction" => Measurement::Prediction,
            "evaluation" => Measurement::Evaluation,
            "generation" => Measurement::Generation,
            _ => return Err(Error::InvalidParameter("unknown measurement")),
        })
    }
}

/// Prompt condition a readout was collected under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Condition {
    Default,
    Strong,
    Weak,
    Explicit,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::Default,
        Condition::Strong,
        Condition::Weak,
        Condition::Explicit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Default => "default",
            Condition::Strong => "strong",
            Condition::Weak => "weak",
            Condition::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or(Error::InvalidParameter("unknown condition"))
    }
}

/// How a prediction curve was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Provenance {
    /// Yes probability renormalized over the Yes/No answer alternatives.
    AnswerProbability,
    /// Fraction of valid Yes answers among repeated sampled replies.
    TextResponse,
    Synthetic,
}

/// Per-target yes-probability curve; index `i` holds `q(i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionReadout {
    pub curve: Vec<f64>,
    pub provenance: Provenance,
    /// Valid-answer counts per target, for text-response curves.
    pub valid_counts: Option<Vec<u32>>,
}

impl PredictionReadout {
    /// Checks length and bounds; values outside `[0, 1]` are rejected, not clamped.
    pub fn new(curve: Vec<f64>, d: u32, provenance: Provenance) -> Result<Self> {
        check_curve(&curve, d)?;
        Ok(PredictionReadout {
            curve,
            provenance,
            valid_counts: None,
        })
    }

    pub fn d(&self) -> u32 {
        self.curve.len() as u32
    }
}

pub(crate) fn check_curve(curve: &[f64], d: u32) -> Result<()> {
    if curve.len() != d as usize {
        return Err(Error::LengthMismatch {
            expected: d as usize,
            found: curve.len(),
        });
    }
    if let Some((index, &value)) = curve
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::OutOfRange { index, value });
    }
    Ok(())
}

/// `q(y) = yes(y) / valid(y)` from repeated categorical replies.
pub fn curve_from_counts(yes_counts: &[u32], valid_counts: &[u32]) -> Result<PredictionReadout> {
    if yes_counts.len() != valid_counts.len() {
        return Err(Error::LengthMismatch {
            expected: valid_counts.len(),
            found: yes_counts.len(),
        });
    }
    let missing: Vec<u32> = valid_counts
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 0)
        .map(|(i, _)| i as u32 + 1)
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingTargets(missing));
    }
    let mut curve = Vec::with_capacity(yes_counts.len());
    for (i, (&yes, &valid)) in yes_counts.iter().zip(valid_counts).enumerate() {
        if yes > valid {
            return Err(Error::InvalidCounts {
                target: i as u32 + 1,
                yes,
                valid,
            });
        }
        curve.push(yes as f64 / valid as f64);
    }
    Ok(PredictionReadout {
        curve,
        provenance: Provenance::TextResponse,
        valid_counts: Some(valid_counts.to_vec()),
    })
}

/// One retained label after normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelEntry {
    pub label: String,
    /// Share of the post-collapse raw mass; all entries sum to 1.
    pub confidence: f64,
    /// Executable support and kind, when the label matched the grammar.
    pub support: Option<(Support, HypothesisKind)>,
}

impl LabelEntry {
    pub fn is_matched(&self) -> bool {
        self.support.is_some()
    }
}

/// Weighted hypothesis labels from the evaluation or generation probe.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelReadout {
    pub measurement: Measurement,
    pub d: u32,
    pub entries: Vec<LabelEntry>,
    pub matched_mass: f64,
    pub unmatched_mass: f64,
}

impl LabelReadout {
    /// Matched entries with their weights rescaled to sum to 1.
    pub fn matched(&self) -> impl Iterator<Item = (&LabelEntry, f64)> {
        let total = self.matched_mass;
        self.entries
            .iter()
            .filter(|e| e.is_matched())
            .map(move |e| (e, e.confidence / total))
    }

    /// `(label, confidence)` pairs, suitable for feeding back into [`normalize_labels`].
    pub fn raw_entries(&self) -> Vec<(String, f64)> {
        self.entries
            .iter()
            .map(|e| (e.label.clone(), e.confidence))
            .collect()
    }
}

/// Normalizes raw `(label, confidence)` pairs.
///
/// Zero-confidence entries are dropped. Generation labels are parsed through
/// the label grammar and entries resolving to one support are collapsed,
/// keeping the larger confidence. Evaluation labels must come from the
/// candidate list. Confidences are then expressed as shares of the retained
/// mass; matched and unmatched shares are reported separately.
pub fn normalize_labels(
    raw: &[(String, f64)],
    candidates: Option<&CandidateList>,
    measurement: Measurement,
    d: u32,
) -> Result<LabelReadout> {
    if measurement == Measurement::Prediction {
        return Err(Error::InvalidParameter("prediction readouts carry curves, not labels"));
    }
    if raw.iter().any(|(_, c)| !(c.is_finite() && *c >= 0.0)) {
        return Err(Error::InvalidParameter("label confidences must be finite and non-negative"));
    }
    let mut entries: Vec<LabelEntry> = Vec::new();
    for (label, confidence) in raw.iter().filter(|(_, c)| *c > 0.0) {
        let support = match measurement {
            Measurement::Evaluation => {
                let list = candidates.ok_or(Error::InvalidParameter(
                    "evaluation readouts need the candidate list",
                ))?;
                let candidate = list
                    .get(label)
                    .ok_or_else(|| Error::LabelNotInCandidates(label.clone()))?;
                candidate.support.clone().map(|s| {
                    let kind = match candidate.kind {
                        crate::registry::CandidateKind::Rule => HypothesisKind::Rule,
                        _ => HypothesisKind::Interval,
                    };
                    (s, kind)
                })
            }
            _ if label.trim().eq_ignore_ascii_case(OTHER_LABEL) => None,
            _ => parse_label(label, d).map(|h| (h.support, h.kind)),
        };
        let collapse_into = match (&support, measurement) {
            (Some((s, _)), Measurement::Generation) => entries
                .iter()
                .position(|e| e.support.as_ref().is_some_and(|(t, _)| t == s)),
            // repeated displayed labels in an evaluation list
            (_, Measurement::Evaluation) => entries.iter().position(|e| e.label == *label),
            _ => None,
        };
        match collapse_into {
            Some(i) => {
                if *confidence > entries[i].confidence {
                    entries[i].confidence = *confidence;
                    entries[i].label = label.clone();
                }
            }
            None => entries.push(LabelEntry {
                label: label.clone(),
                confidence: *confidence,
                support,
            }),
        }
    }
    let total: f64 = entries.iter().map(|e| e.confidence).sum();
    if !(total > 0.0) {
        return Err(Error::EmptyReadout);
    }
    for e in &mut entries {
        e.confidence /= total;
    }
    let matched_mass: f64 = entries
        .iter()
        .filter(|e| e.is_matched())
        .map(|e| e.confidence)
        .fold(0.0, |acc, c| acc + c);
    let unmatched_mass: f64 = entries
        .iter()
        .filter(|e| !e.is_matched())
        .map(|e| e.confidence)
        .fold(0.0, |acc, c| acc + c);
    Ok(LabelReadout {
        measurement,
        d,
        entries,
        matched_mass,
        unmatched_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{build_space, candidate_list, Domain, Task};
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn raw(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|(l, c)| (l.to_string(), *c)).collect()
    }

    #[test]
    fn counts_to_curve() {
        let r = curve_from_counts(&[20, 7, 0], &[20, 20, 15]).unwrap();
        assert_eq!(r.curve, vec![1.0, 0.35, 0.0]);
        assert_eq!(r.provenance, Provenance::TextResponse);
        assert_eq!(r.valid_counts.as_deref(), Some(&[20, 20, 15][..]));
    }

    #[test]
    fn counts_missing_targets() {
        let err = curve_from_counts(&[0, 0, 0], &[3, 0, 0]).unwrap_err();
        assert_eq!(err, Error::MissingTargets(vec![2, 3]));
        assert!(matches!(
            curve_from_counts(&[4], &[3]).unwrap_err(),
            Error::InvalidCounts { target: 1, .. }
        ));
    }

    #[test]
    fn curve_bounds_rejected() {
        assert!(matches!(
            PredictionReadout::new(vec![0.5, 1.2], 2, Provenance::Synthetic),
            Err(Error::OutOfRange { index: 1, .. })
        ));
        assert!(PredictionReadout::new(vec![0.5], 2, Provenance::Synthetic).is_err());
        assert!(PredictionReadout::new(vec![f64::NAN, 0.1], 2, Provenance::Synthetic).is_err());
    }

    #[test]
    fn same_support_collapses() {
        let r = normalize_labels(
            &raw(&[("powers of 2", 0.6), ("powers of two", 0.3)]),
            None,
            Measurement::Generation,
            100,
        )
        .unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].label, "powers of 2");
        assert_eq!(r.matched().next().unwrap().1, 1.0);
        assert_eq!(r.unmatched_mass, 0.0);
    }

    #[test]
    fn unmatched_mass_reported() {
        let r = normalize_labels(
            &raw(&[("even numbers", 0.5), ("gut feeling", 0.5)]),
            None,
            Measurement::Generation,
            100,
        )
        .unwrap();
        assert_eq!(r.matched_mass, 0.5);
        assert_eq!(r.unmatched_mass, 0.5);
        let matched: Vec<_> = r.matched().collect();
        assert_eq!(matched.len(), 1);
        assert_eq!(matched[0].1, 1.0);
    }

    #[test]
    fn uniform_generation_weights() {
        let labels: Vec<String> = (3..=12).map(|k| alloc::format!("multiples of {k}")).collect();
        let pairs: Vec<(String, f64)> = labels.into_iter().map(|l| (l, 0.7)).collect();
        let r = normalize_labels(&pairs, None, Measurement::Generation, 100).unwrap();
        assert_eq!(r.entries.len(), 10);
        for (_, w) in r.matched() {
            assert!((w - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_weights_are_an_error() {
        let err = normalize_labels(&raw(&[("even numbers", 0.0)]), None, Measurement::Generation, 100);
        assert_eq!(err.unwrap_err(), Error::EmptyReadout);
    }

    #[test]
    fn evaluation_uses_candidate_list() {
        let space = build_space(Task::Tenenbaum99, Domain::new(100).unwrap()).unwrap();
        let k = candidate_list(&space, &[16, 8, 2, 64]).unwrap();
        let r = normalize_labels(
            &raw(&[("powers of 2", 3.0), ("interval 1..70", 0.0), ("other", 1.0)]),
            Some(&k),
            Measurement::Evaluation,
            100,
        )
        .unwrap();
        assert_eq!(r.entries.len(), 2);
        assert_eq!(r.matched_mass, 0.75);
        assert_eq!(r.unmatched_mass, 0.25);
        let err = normalize_labels(&raw(&[("powers of two", 1.0)]), Some(&k), Measurement::Evaluation, 100);
        assert!(matches!(err, Err(Error::LabelNotInCandidates(_))));
    }

    const POOL: [&str; 8] = [
        "even numbers",
        "powers of two",
        "powers of 2",
        "multiples of 2",
        "interval 10..20",
        "between 10 and 20",
        "lucky numbers",
        "other",
    ];

    proptest! {
        #[test]
        fn normalization_idempotent_and_mass_accounted(
            picks in proptest::collection::vec((0usize..POOL.len(), 0.0f64..5.0), 1..12)
        ) {
            let pairs: Vec<(String, f64)> = picks.iter().map(|&(i, c)| (POOL[i].to_string(), c)).collect();
            if let Ok(once) = normalize_labels(&pairs, None, Measurement::Generation, 100) {
                prop_assert!((once.matched_mass + once.unmatched_mass - 1.0).abs() < 1e-12);
                let twice = normalize_labels(&once.raw_entries(), None, Measurement::Generation, 100).unwrap();
                prop_assert_eq!(twice.entries.len(), once.entries.len());
                for (a, b) in once.entries.iter().zip(&twice.entries) {
                    prop_assert_eq!(&a.label, &b.label);
                    prop_assert!((a.confidence - b.confidence).abs() < 1e-12);
                }
            }
        }
    }
}
