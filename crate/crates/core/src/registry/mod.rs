//! Rule-and-interval hypothesis spaces and their prior.
//!
//! Three task/domain cells are configured: Tenenbaum99 at `d = 100` and
//! `d = 200`, and Bigelow16 at `d = 100`. Rules are generated from base
//! families (plus transforms for Bigelow16), deduplicated by extension, and
//! pruned of supports with fewer than [`MIN_RULE_SUPPORT`] members. Intervals
//! have endpoints on the grid `{1} ∪ {5, 10, ..., d}`.

mod candidates;
pub mod families;
mod labels;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use candidates::{candidate_list, Candidate, CandidateKind, CandidateList};
pub use families::{Family, Transform};
pub use labels::{canonicalize, parse_label, ALL_NUMBERS_LABEL, OTHER_LABEL, SYNONYM_TABLE_VERSION};

use crate::error::{Error, Result};
use crate::math;
use crate::Support;

/// Prior mass shared uniformly by the rule hypotheses.
pub const RULE_MASS: f64 = 0.6667;
/// Scale of the Erlang size prior over interval hypotheses.
pub const ERLANG_SCALE: f64 = 10.0;
/// Rules with fewer members than this are dropped.
pub const MIN_RULE_SUPPORT: usize = 3;
/// Spacing of the interval endpoint grid.
pub const INTERVAL_GRID_STEP: u32 = 5;

/// The integer domain `{1, ..., d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Domain(u32);

impl Domain {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDomain(d));
        }
        Ok(Domain(d))
    }

    pub fn size(self) -> u32 {
        self.0
    }

    pub fn contains(self, y: u32) -> bool {
        (1..=self.0).contains(&y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Task {
    Tenenbaum99,
    Bigelow16,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Tenenbaum99 => "tenenbaum99",
            Task::Bigelow16 => "bigelow16",
        }
    }

    /// Whether a hypothesis space is configured for this task at size `d`.
    pub fn is_configured(self, d: u32) -> bool {
        matches!((self, d), (Task::Tenenbaum99, 100 | 200) | (Task::Bigelow16, 100))
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tenenbaum99" => Ok(Task::Tenenbaum99),
            "bigelow16" => Ok(Task::Bigelow16),
            _ => Err(Error::UnknownCell {
                task: s.into(),
                d: 0,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum HypothesisKind {
    Rule,
    Interval,
}

/// A named subset of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub label: String,
    pub kind: HypothesisKind,
    pub family: Family,
    pub transform: Option<Transform>,
    pub support: Support,
}

impl Hypothesis {
    pub fn new(
        kind: HypothesisKind,
        family: Family,
        transform: Option<Transform>,
        support: Support,
    ) -> Self {
        let label = labels::format_label(family, transform, &support);
        Hypothesis {
            label,
            kind,
            family,
            transform,
            support,
        }
    }

    pub fn interval(d: u32, lo: u32, hi: u32) -> Self {
        Hypothesis::new(
            HypothesisKind::Interval,
            Family::Interval,
            None,
            Support::range(d, lo, hi),
        )
    }

    pub fn size(&self) -> usize {
        self.support.len()
    }

    pub fn is_rule(&self) -> bool {
        self.kind == HypothesisKind::Rule
    }
}

/// Canonical label of a hypothesis.
pub fn format_label(h: &Hypothesis) -> String {
    labels::format_label(h.family, h.transform, &h.support)
}

/// Deduplicated rules and intervals for one task/domain cell, with the prior.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisSpace {
    task: Task,
    domain: Domain,
    hypotheses: Vec<Hypothesis>,
    prior: Vec<f64>,
}

impl HypothesisSpace {
    /// Reassembles a space from exported parts, checking the structural invariants.
    pub fn from_parts(
        task: Task,
        domain: Domain,
        hypotheses: Vec<Hypothesis>,
        prior: Vec<f64>,
    ) -> Result<Self> {
        if hypotheses.len() != prior.len() {
            return Err(Error::LengthMismatch {
                expected: hypotheses.len(),
                found: prior.len(),
            });
        }
        if hypotheses.is_empty() {
            return Err(Error::EmptyFamily("hypothesis"));
        }
        let mut seen = BTreeSet::new();
        for h in &hypotheses {
            if h.support.is_empty() || h.support.domain_size() != domain.size() {
                return Err(Error::InvalidParameter("hypothesis support outside the domain"));
            }
            if h.kind == HypothesisKind::Interval && !h.support.is_contiguous() {
                return Err(Error::InvalidParameter("interval support is not contiguous"));
            }
            if !seen.insert(&h.support) {
                return Err(Error::InvalidParameter("two hypotheses share an extension"));
            }
        }
        if prior.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidParameter("prior masses must be positive"));
        }
        Ok(HypothesisSpace {
            task,
            domain,
            hypotheses,
            prior,
        })
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn d(&self) -> u32 {
        self.domain.size()
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter().filter(|h| h.is_rule())
    }

    pub fn rule_count(&self) -> usize {
        self.rules().count()
    }

    pub fn interval_count(&self) -> usize {
        self.len() - self.rule_count()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.hypotheses.iter().position(|h| h.label == label)
    }

    /// Labels shown to a model for the rule part of the candidate list.
    ///
    /// Tenenbaum99 shows every rule; Bigelow16 shows the 15 primordial
    /// families, each standing for its untransformed extension.
    pub fn prompt_rules(&self) -> Vec<Hypothesis> {
        match self.task {
            Task::Tenenbaum99 => self.rules().cloned().collect(),
            Task::Bigelow16 => families::bigelow_families()
                .into_iter()
                .map(|f| {
                    let support = Transform::map_support(None, f, self.d());
                    Hypothesis::new(HypothesisKind::Rule, f, None, support)
                })
                .collect(),
        }
    }
}

fn check_cell(task: Task, domain: Domain) -> Result<()> {
    if task.is_configured(domain.size()) {
        Ok(())
    } else {
        Err(Error::UnknownCell {
            task: task.as_str().into(),
            d: domain.size(),
        })
    }
}

/// Generates the rule registry for a configured cell.
pub fn build_rules(task: Task, domain: Domain) -> Result<Vec<Hypothesis>> {
    check_cell(task, domain)?;
    let d = domain.size();
    let candidates: Vec<(Family, Option<Transform>)> = match task {
        Task::Tenenbaum99 => families::tenenbaum_families()
            .into_iter()
            .map(|f| (f, None))
            .collect(),
        Task::Bigelow16 => families::bigelow_families()
            .into_iter()
            .flat_map(|f| {
                core::iter::once((f, None))
                    .chain(families::BIGELOW_TRANSFORMS.iter().map(move |&t| (f, Some(t))))
            })
            .collect(),
    };
    let mut seen: BTreeSet<Support> = BTreeSet::new();
    let mut rules = Vec::new();
    for (family, transform) in candidates {
        let support = Transform::map_support(transform, family, d);
        if support.len() < MIN_RULE_SUPPORT || seen.contains(&support) {
            continue;
        }
        seen.insert(support.clone());
        rules.push(Hypothesis::new(HypothesisKind::Rule, family, transform, support));
    }
    Ok(rules)
}

/// Endpoint grid `{1} ∪ {5, 10, ..., d}`.
pub fn interval_grid(d: u32) -> Vec<u32> {
    core::iter::once(1)
        .chain((INTERVAL_GRID_STEP..=d).step_by(INTERVAL_GRID_STEP as usize))
        .collect()
}

/// All grid intervals `[a, b]`, `a <= b`, except the full domain.
pub fn build_intervals(domain: Domain) -> Vec<Hypothesis> {
    let d = domain.size();
    let grid = interval_grid(d);
    let mut out = Vec::new();
    for (i, &lo) in grid.iter().enumerate() {
        for &hi in &grid[i..] {
            if lo == 1 && hi == d {
                continue;
            }
            out.push(Hypothesis::interval(d, lo, hi));
        }
    }
    out
}

/// Erlang size density `(s / σ²) · exp(−s / σ)`, unnormalized.
pub fn erlang_density(size: f64, scale: f64) -> f64 {
    size / (scale * scale) * math::exp(-size / scale)
}

/// Builds rules and intervals and assigns the prior: [`RULE_MASS`] spread
/// uniformly over rules, the rest over intervals by Erlang size density.
pub fn build_space(task: Task, domain: Domain) -> Result<HypothesisSpace> {
    let rules = build_rules(task, domain)?;
    let intervals = build_intervals(domain);
    if rules.is_empty() {
        return Err(Error::EmptyFamily("rule"));
    }
    if intervals.is_empty() {
        return Err(Error::EmptyFamily("interval"));
    }
    let rule_each = RULE_MASS / rules.len() as f64;
    let densities: Vec<f64> = intervals
        .iter()
        .map(|h| erlang_density(h.size() as f64, ERLANG_SCALE))
        .collect();
    let total: f64 = densities.iter().sum();
    let mut prior = Vec::with_capacity(rules.len() + intervals.len());
    prior.extend(core::iter::repeat_n(rule_each, rules.len()));
    prior.extend(densities.iter().map(|w| (1.0 - RULE_MASS) * w / total));

    let mut hypotheses = rules;
    hypotheses.extend(intervals);
    HypothesisSpace::from_parts(task, domain, hypotheses, prior)
}
