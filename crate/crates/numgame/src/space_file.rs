//! JSON export of a hypothesis space.
//!
//! Supports are stored as inclusive runs (`[[lo, hi], ...]`), which keeps
//! intervals to a single pair and rules reasonably compact. Priors are written
//! with round-trip float formatting, so import restores them bit for bit.

use std::fs;
use std::path::Path;

use numgame_core::registry::{Family, Transform};
use numgame_core::{Domain, Hypothesis, HypothesisKind, HypothesisSpace, Support, Task};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPACE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub version: u32,
    pub task: Task,
    pub d: u32,
    pub hypotheses: Vec<HypothesisRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub label: String,
    pub kind: HypothesisKind,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
    pub support_runs: Vec<[u32; 2]>,
    pub prior: f64,
}

impl SpaceFile {
    pub fn from_space(space: &HypothesisSpace) -> Self {
        let hypotheses = space
            .hypotheses()
            .iter()
            .zip(space.prior())
            .map(|(h, &prior)| HypothesisRecord {
                label: h.label.clone(),
                kind: h.kind,
                family: h.family.tag(),
                transform: h.transform.map(|t| t.to_string()),
                support_runs: h.support.runs(),
                prior,
            })
            .collect();
        SpaceFile {
            version: SPACE_FORMAT_VERSION,
            task: space.task(),
            d: space.d(),
            hypotheses,
        }
    }

    pub fn into_space(self) -> Result<HypothesisSpace> {
        if self.version != SPACE_FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported space format version {}",
                self.version
            )));
        }
        let domain = Domain::new(self.d)?;
        let mut hypotheses = Vec::with_capacity(self.hypotheses.len());
        let mut prior = Vec::with_capacity(self.hypotheses.len());
        for rec in self.hypotheses {
            let family = Family::from_tag(&rec.family)
                .ok_or_else(|| Error::Validation(format!("unknown family tag {:?}", rec.family)))?;
            let transform = rec
                .transform
                .as_deref()
                .map(|t| {
                    Transform::parse(t)
                        .ok_or_else(|| Error::Validation(format!("unknown transform {t:?}")))
                })
                .transpose()?;
            if rec.support_runs.iter().any(|&[lo, hi]| lo == 0 || lo > hi || hi > self.d) {
                return Err(Error::Validation(format!(
                    "support of {:?} leaves the domain 1..{}",
                    rec.label, self.d
                )));
            }
            hypotheses.push(Hypothesis {
                label: rec.label,
                kind: rec.kind,
                family,
                transform,
                support: Support::from_runs(self.d, &rec.support_runs),
            });
            prior.push(rec.prior);
        }
        Ok(HypothesisSpace::from_parts(self.task, domain, hypotheses, prior)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }
}

/// Expected `(rules, total)` for every configured task and domain.
pub fn golden_counts(task: Task, d: u32) -> Option<(usize, usize)> {
    match (task, d) {
        (Task::Tenenbaum99, 100) => Some((31, 261)),
        (Task::Tenenbaum99, 200) => Some((32, 892)),
        (Task::Bigelow16, 100) => Some((128, 358)),
        _ => None,
    }
}
