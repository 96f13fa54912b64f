//! Example-conditioned candidate list `K(X)` shown in the evaluation probe.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::labels::{interval_label, OTHER_LABEL};
use super::HypothesisSpace;
use crate::error::{Error, Result};
use crate::Support;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    Rule,
    Interval,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub kind: CandidateKind,
    /// `None` only for the residual "other" entry.
    pub support: Option<Support>,
}

/// Prompt rules, then `I_10`, `I_5`, `I_minmax`, `I_all`, then "other".
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateList {
    pub entries: Vec<Candidate>,
}

impl CandidateList {
    /// Entry count before repeated interval labels are collapsed.
    pub fn raw_len(&self) -> usize {
        self.entries.len()
    }

    /// Unique displayed entries, first occurrence kept.
    pub fn displayed(&self) -> Vec<&Candidate> {
        let mut out: Vec<&Candidate> = Vec::new();
        for c in &self.entries {
            if !out.iter().any(|o| o.label == c.label) {
                out.push(c);
            }
        }
        out
    }

    pub fn get(&self, label: &str) -> Option<&Candidate> {
        self.entries.iter().find(|c| c.label == label)
    }
}

fn round_out(lo: u32, hi: u32, step: u32, d: u32) -> (u32, u32) {
    let lo = (lo / step * step).max(1);
    let hi = (hi.div_ceil(step) * step).min(d);
    (lo, hi)
}

pub fn candidate_list(space: &HypothesisSpace, examples: &[u32]) -> Result<CandidateList> {
    let d = space.d();
    if examples.is_empty() {
        return Err(Error::NoExamples);
    }
    if let Some(&bad) = examples.iter().find(|&&x| !space.domain().contains(x)) {
        return Err(Error::ExampleOutOfDomain { example: bad, d });
    }
    let lo = *examples.iter().min().unwrap();
    let hi = *examples.iter().max().unwrap();

    let mut entries: Vec<Candidate> = space
        .prompt_rules()
        .into_iter()
        .map(|h| Candidate {
            label: h.label,
            kind: CandidateKind::Rule,
            support: Some(h.support),
        })
        .collect();
    let intervals = [round_out(lo, hi, 10, d), round_out(lo, hi, 5, d), (lo, hi), (1, d)];
    for (a, b) in intervals {
        let support = Support::range(d, a, b);
        entries.push(Candidate {
            label: interval_label(&support),
            kind: CandidateKind::Interval,
            support: Some(support),
        });
    }
    entries.push(Candidate {
        label: OTHER_LABEL.to_string(),
        kind: CandidateKind::Other,
        support: None,
    });
    Ok(CandidateList { entries })
}
