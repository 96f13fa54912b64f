//! Synthetic agents with known generative processes.
//!
//! They produce readouts in the same shape as behavioral data, so fitting,
//! projection and metrics can be checked against ground truth.

use alloc::string::ToString;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bayes::{posterior, predictive, Posterior};
use crate::error::{Error, Result};
use crate::readout::{LabelEntry, LabelReadout, Measurement, PredictionReadout, Provenance};
use crate::registry::HypothesisSpace;
use crate::stimuli::Presentation;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum AgentKind {
    /// Full `(α, β)` posterior predictive.
    Bayesian { alpha: f64, beta: f64 },
    /// Indicator of the single most probable hypothesis under `(α, β)`.
    MapOnly { alpha: f64, beta: f64 },
    /// Indicator of the smallest hypothesis containing the examples.
    NarrowestCompatible,
    /// Flat 0.5 curve; only the noise term varies.
    UniformNoise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AgentSpec {
    pub kind: AgentKind,
    /// Half-width of the additive uniform noise, in `[0, 0.5]`.
    pub noise: f64,
    pub seed: u64,
}

impl AgentSpec {
    pub fn new(kind: AgentKind, noise: f64, seed: u64) -> Result<Self> {
        if !(0.0..=0.5).contains(&noise) {
            return Err(Error::InvalidParameter("noise amplitude must be in [0, 0.5]"));
        }
        if let AgentKind::Bayesian { alpha, beta } | AgentKind::MapOnly { alpha, beta } = kind {
            if !(alpha.is_finite() && alpha >= 0.0 && beta.is_finite() && beta >= 0.0) {
                return Err(Error::InvalidParameter("agent alpha and beta must be non-negative"));
            }
        }
        Ok(AgentSpec { kind, noise, seed })
    }

    pub fn bayesian(alpha: f64, beta: f64) -> Self {
        AgentSpec {
            kind: AgentKind::Bayesian { alpha, beta },
            noise: 0.0,
            seed: 0,
        }
    }
}

/// Per-presentation RNG, independent of emission order.
fn rng_for(spec: &AgentSpec, d: u32, p: &Presentation) -> ChaCha8Rng {
    // FNV-1a over the presentation key
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    feed(p.source.as_str().as_bytes());
    feed(&[0]);
    feed(p.stimulus_id.as_bytes());
    feed(&(p.n as u64).to_le_bytes());
    feed(&d.to_le_bytes());
    ChaCha8Rng::seed_from_u64(spec.seed ^ h)
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn narrowest(space: &HypothesisSpace, examples: &[u32]) -> Option<usize> {
    space
        .hypotheses()
        .iter()
        .enumerate()
        .filter(|(_, h)| h.support.contains_all(examples))
        .min_by_key(|(i, h)| (h.size(), *i))
        .map(|(i, _)| i)
}

fn indicator(space: &HypothesisSpace, index: usize) -> Vec<f64> {
    let h = &space.hypotheses()[index];
    (1..=space.d())
        .map(|y| if h.support.contains(y) { 1.0 } else { 0.0 })
        .collect()
}

/// Posterior, or `None` when the examples fall outside every hypothesis.
fn try_posterior<'a>(
    space: &'a HypothesisSpace,
    examples: &[u32],
    alpha: f64,
    beta: f64,
) -> Result<Option<Posterior<'a>>> {
    match posterior(space, examples, alpha, beta) {
        Ok(p) => Ok(Some(p)),
        Err(Error::EmptySupport) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Prediction curve for one presentation; `None` marks a skipped presentation.
pub fn emit_prediction(
    spec: &AgentSpec,
    space: &HypothesisSpace,
    presentation: &Presentation,
) -> Result<Option<PredictionReadout>> {
    let examples = &presentation.examples;
    let mut curve = match spec.kind {
        AgentKind::Bayesian { alpha, beta } => match try_posterior(space, examples, alpha, beta)? {
            Some(post) => predictive(&post).values,
            None => return Ok(None),
        },
        AgentKind::MapOnly { alpha, beta } => match try_posterior(space, examples, alpha, beta)? {
            Some(post) => indicator(space, post.argmax()),
            None => return Ok(None),
        },
        AgentKind::NarrowestCompatible => {
            crate::bayes::validate_examples(examples, space.d())?;
            match narrowest(space, examples) {
                Some(i) => indicator(space, i),
                None => return Ok(None),
            }
        }
        AgentKind::UniformNoise => alloc::vec![0.5; space.d() as usize],
    };
    if spec.noise > 0.0 {
        let mut rng = rng_for(spec, space.d(), presentation);
        for v in &mut curve {
            let delta = (2.0 * unit(&mut rng) - 1.0) * spec.noise;
            *v = (*v + delta).clamp(0.0, 1.0);
        }
    }
    Ok(Some(PredictionReadout {
        curve,
        provenance: Provenance::Synthetic,
        valid_counts: None,
    }))
}

/// Up to `k` weighted hypothesis labels, as a generation readout.
///
/// The Bayesian agent returns its top-`k` hypotheses weighted by posterior
/// mass; with `k` at least the number of compatible hypotheses the weights are
/// the full posterior.
pub fn emit_labels(
    spec: &AgentSpec,
    space: &HypothesisSpace,
    presentation: &Presentation,
    k: usize,
) -> Result<Option<LabelReadout>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    let examples = &presentation.examples;
    let weighted: Vec<(usize, f64)> = match spec.kind {
        AgentKind::Bayesian { alpha, beta } => match try_posterior(space, examples, alpha, beta)? {
            Some(post) => {
                let mut ranked: Vec<(usize, f64)> = post
                    .masses
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|(_, m)| *m > 0.0)
                    .collect();
                ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
                ranked.truncate(k);
                ranked
            }
            None => return Ok(None),
        },
        AgentKind::MapOnly { alpha, beta } => match try_posterior(space, examples, alpha, beta)? {
            Some(post) => alloc::vec![(post.argmax(), 1.0)],
            None => return Ok(None),
        },
        AgentKind::NarrowestCompatible => {
            crate::bayes::validate_examples(examples, space.d())?;
            match narrowest(space, examples) {
                Some(i) => alloc::vec![(i, 1.0)],
                None => return Ok(None),
            }
        }
        AgentKind::UniformNoise => {
            crate::bayes::validate_examples(examples, space.d())?;
            let mut compatible: Vec<usize> = (0..space.len())
                .filter(|&i| space.hypotheses()[i].support.contains_all(examples))
                .collect();
            if compatible.is_empty() {
                return Ok(None);
            }
            // seeded partial Fisher-Yates
            let mut rng = rng_for(spec, space.d(), presentation);
            let take = k.min(compatible.len());
            for i in 0..take {
                let j = i + (rng.next_u64() % (compatible.len() - i) as u64) as usize;
                compatible.swap(i, j);
            }
            compatible.truncate(take);
            compatible.into_iter().map(|i| (i, 1.0)).collect()
        }
    };
    let total: f64 = weighted.iter().map(|(_, w)| w).sum();
    let entries = weighted
        .into_iter()
        .map(|(i, w)| {
            let h = &space.hypotheses()[i];
            LabelEntry {
                label: h.label.to_string(),
                confidence: w / total,
                support: Some((h.support.clone(), h.kind)),
            }
        })
        .collect();
    Ok(Some(LabelReadout {
        measurement: Measurement::Generation,
        d: space.d(),
        entries,
        matched_mass: 1.0,
        unmatched_mass: 0.0,
    }))
}
