//! Exact Bayesian engine for the number game.
//!
//! Hypotheses are subsets of a finite integer domain `{1, ..., d}`: mathematical
//! rules (parity, multiples, powers, ...) and contiguous intervals. Given a few
//! positive examples the engine computes the posterior over hypotheses under a
//! two-parameter family
//!
//! ```text
//! p(h | X) ∝ 1[X ⊆ h] · p(h)^α · |h|^(−β·|X|)
//! ```
//!
//! and the posterior predictive obtained by hypothesis averaging. `(α, β) = (1, 1)`
//! is the Bayesian reference; `β = 0` is weak sampling.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, manifests and the
//! command-line front end live in the `numgame` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod agent;
pub mod bayes;
mod error;
pub mod fit;
mod math;
pub mod metrics;
pub mod readout;
pub mod registry;
pub mod stimuli;
mod support;

pub use error::{Error, Result};
pub use support::Support;

pub use bayes::{likelihood, posterior, posterior_entropy, predictive, Posterior, Predictive};
pub use registry::{
    build_intervals, build_rules, build_space, candidate_list, format_label, parse_label,
    CandidateList, Domain, Hypothesis, HypothesisKind, HypothesisSpace, Task,
};
