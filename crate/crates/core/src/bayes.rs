//! Exact posterior and posterior predictive for the `(α, β)` family.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::registry::{Hypothesis, HypothesisSpace};

/// Checks that `examples` is a non-empty list of distinct integers in `1..=d`.
pub fn validate_examples(examples: &[u32], d: u32) -> Result<()> {
    if examples.is_empty() {
        return Err(Error::NoExamples);
    }
    for (i, &x) in examples.iter().enumerate() {
        if x == 0 || x > d {
            return Err(Error::ExampleOutOfDomain { example: x, d });
        }
        if examples[..i].contains(&x) {
            return Err(Error::DuplicateExample(x));
        }
    }
    Ok(())
}

/// `|h|^(−β·|X|)` when every example lies in `h`, else 0.
///
/// `β = 1` is strong sampling, `β = 0` weak sampling.
pub fn likelihood(h: &Hypothesis, examples: &[u32], beta: f64) -> f64 {
    if !h.support.contains_all(examples) {
        return 0.0;
    }
    math::exp(-beta * examples.len() as f64 * math::ln(h.size() as f64))
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter("alpha must be a finite non-negative real"));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParameter("beta must be a finite non-negative real"));
    }
    Ok(())
}

/// Normalized posterior over a hypothesis space.
#[derive(Debug, Clone)]
pub struct Posterior<'a> {
    pub space: &'a HypothesisSpace,
    pub alpha: f64,
    pub beta: f64,
    pub masses: Vec<f64>,
    examples: Vec<u32>,
}

impl<'a> Posterior<'a> {
    pub fn examples(&self) -> &[u32] {
        &self.examples
    }

    /// Index of the highest-mass hypothesis; ties go to the earlier entry.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &m) in self.masses.iter().enumerate() {
            if m > self.masses[best] {
                best = i;
            }
        }
        best
    }

    pub fn map_hypothesis(&self) -> &'a Hypothesis {
        &self.space.hypotheses()[self.argmax()]
    }

    /// Total mass on rule hypotheses.
    pub fn rule_mass(&self) -> f64 {
        self.space
            .hypotheses()
            .iter()
            .zip(&self.masses)
            .filter(|(h, _)| h.is_rule())
            .map(|(_, m)| m)
            .fold(0.0, |acc, m| acc + m)
    }
}

/// Unnormalized log weight `α·ln p(h) − β·|X|·ln |h|` of a compatible hypothesis.
#[inline]
pub(crate) fn log_weight(ln_prior: f64, ln_size: f64, n_examples: usize, alpha: f64, beta: f64) -> f64 {
    let prior_term = if alpha == 0.0 { 0.0 } else { alpha * ln_prior };
    let size_term = if beta == 0.0 {
        0.0
    } else {
        beta * n_examples as f64 * ln_size
    };
    prior_term - size_term
}

/// `p(h | X) ∝ 1[X ⊆ h] · p(h)^α · |h|^(−β|X|)`, computed in log space.
pub fn posterior<'a>(
    space: &'a HypothesisSpace,
    examples: &[u32],
    alpha: f64,
    beta: f64,
) -> Result<Posterior<'a>> {
    check_params(alpha, beta)?;
    validate_examples(examples, space.d())?;
    let mut logw = vec![f64::NEG_INFINITY; space.len()];
    let mut max = f64::NEG_INFINITY;
    for (i, (h, &p)) in space.hypotheses().iter().zip(space.prior()).enumerate() {
        if h.support.contains_all(examples) {
            let w = log_weight(math::ln(p), math::ln(h.size() as f64), examples.len(), alpha, beta);
            logw[i] = w;
            if w > max {
                max = w;
            }
        }
    }
    if max == f64::NEG_INFINITY {
        return Err(Error::EmptySupport);
    }
    let mut masses: Vec<f64> = logw
        .iter()
        .map(|&w| if w == f64::NEG_INFINITY { 0.0 } else { math::exp(w - max) })
        .collect();
    let total: f64 = masses.iter().sum();
    for m in &mut masses {
        *m /= total;
    }
    Ok(Posterior {
        space,
        alpha,
        beta,
        masses,
        examples: examples.to_vec(),
    })
}

/// Per-integer yes-probability curve; index `i` holds `q(i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictive {
    pub values: Vec<f64>,
}

impl Predictive {
    pub fn d(&self) -> u32 {
        self.values.len() as u32
    }

    /// `q(y)` for `y` in `1..=d`.
    pub fn at(&self, y: u32) -> f64 {
        self.values[(y - 1) as usize]
    }
}

/// Hypothesis averaging: `q(y) = Σ_h 1[y ∈ h] · p(h | X)`.
pub fn predictive(posterior: &Posterior<'_>) -> Predictive {
    let mut values = vec![0.0; posterior.space.d() as usize];
    for (h, &m) in posterior.space.hypotheses().iter().zip(&posterior.masses) {
        if m == 0.0 {
            continue;
        }
        for y in h.support.iter() {
            values[(y - 1) as usize] += m;
        }
    }
    for v in &mut values {
        *v = v.min(1.0);
    }
    // every compatible hypothesis contains the examples
    for &x in posterior.examples() {
        values[(x - 1) as usize] = 1.0;
    }
    Predictive { values }
}

/// Shannon entropy in bits of the curve after normalizing it to sum 1.
pub fn posterior_entropy(curve: &[f64]) -> Result<f64> {
    let total: f64 = curve.iter().sum();
    if !(total > 0.0) || curve.iter().any(|&v| v < 0.0) {
        return Err(Error::Degenerate("entropy curve"));
    }
    Ok(curve
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let p = v / total;
            -p * math::log2(p)
        })
        .fold(0.0, |acc, h| acc + h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{build_space, parse_label, Domain, Task};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn t99() -> &'static HypothesisSpace {
        static SPACE: OnceLock<HypothesisSpace> = OnceLock::new();
        SPACE.get_or_init(|| build_space(Task::Tenenbaum99, Domain::new(100).unwrap()).unwrap())
    }

    const POW2: [u32; 4] = [16, 8, 2, 64];

    #[test]
    fn likelihood_examples() {
        let pow2 = parse_label("powers of 2", 100).unwrap();
        assert_eq!(pow2.size(), 6);
        let l = likelihood(&pow2, &POW2, 1.0);
        assert!((l - 6f64.powi(-4)).abs() < 1e-15);
        assert_eq!(likelihood(&pow2, &POW2, 0.0), 1.0);
        let even = parse_label("even numbers", 100).unwrap();
        assert_eq!(likelihood(&even, &[3], 1.0), 0.0);
    }

    #[test]
    fn example_validation() {
        assert_eq!(posterior(t99(), &[], 1.0, 1.0).unwrap_err(), Error::NoExamples);
        assert_eq!(posterior(t99(), &[4, 4], 1.0, 1.0).unwrap_err(), Error::DuplicateExample(4));
        assert!(matches!(
            posterior(t99(), &[0], 1.0, 1.0).unwrap_err(),
            Error::ExampleOutOfDomain { .. }
        ));
        assert!(posterior(t99(), &[4], -1.0, 1.0).is_err());
    }

    #[test]
    fn no_compatible_hypothesis() {
        // only [1, 100] spans 2..99, and it is not in the space
        assert_eq!(posterior(t99(), &[2, 99], 1.0, 1.0).unwrap_err(), Error::EmptySupport);
    }

    #[test]
    fn reference_prefers_powers_of_two() {
        let post = posterior(t99(), &POW2, 1.0, 1.0).unwrap();
        assert_eq!(post.map_hypothesis().label, "powers of 2");
        let q = predictive(&post);
        assert!(q.at(32) > q.at(30));
        for x in POW2 {
            assert_eq!(q.at(x), 1.0);
        }
    }

    #[test]
    fn single_survivor_gets_all_mass() {
        use crate::registry::HypothesisKind;
        let d = Domain::new(20).unwrap();
        let hyps = vec![
            parse_label("even numbers", 20).unwrap(),
            parse_label("odd numbers", 20).unwrap(),
            crate::registry::Hypothesis::interval(20, 1, 5),
        ];
        assert_eq!(hyps[2].kind, HypothesisKind::Interval);
        let space = HypothesisSpace::from_parts(Task::Tenenbaum99, d, hyps, vec![0.2, 0.3, 0.5]).unwrap();
        let post = posterior(&space, &[4, 12], 1.7, 0.3).unwrap();
        assert_eq!(post.masses, vec![1.0, 0.0, 0.0]);
        let q = predictive(&post);
        let even: Vec<f64> = (1..=20).map(|y| if y % 2 == 0 { 1.0 } else { 0.0 }).collect();
        assert_eq!(q.values, even);
    }

    #[test]
    fn entropy_cases() {
        let uniform = vec![0.3; 100];
        assert!((posterior_entropy(&uniform).unwrap() - 100f64.log2()).abs() < 1e-12);
        let mut onehot = vec![0.0; 100];
        onehot[4] = 1.0;
        assert_eq!(posterior_entropy(&onehot).unwrap(), 0.0);
        assert!(posterior_entropy(&[0.0; 10]).is_err());
    }

    fn weak_oracle(space: &HypothesisSpace, x: &[u32], alpha: f64) -> Vec<f64> {
        let w: Vec<f64> = space
            .hypotheses()
            .iter()
            .zip(space.prior())
            .map(|(h, p)| if h.support.contains_all(x) { p.powf(alpha) } else { 0.0 })
            .collect();
        let t: f64 = w.iter().sum();
        w.into_iter().map(|v| v / t).collect()
    }

    #[test]
    fn weak_sampling_is_tempered_prior() {
        for x in [&[16u32][..], &[16, 8], &[60, 80, 10, 30], &[16, 23, 19, 20]] {
            for alpha in [0.0, 0.5, 1.0, 2.0] {
                let post = posterior(t99(), x, alpha, 0.0).unwrap();
                let oracle = weak_oracle(t99(), x, alpha);
                for (a, b) in post.masses.iter().zip(&oracle) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn normalized_and_bounded(ai in 0u32..=16, bi in 0u32..=16, start in 1u32..=90, len in 1usize..4) {
            let (alpha, beta) = (ai as f64 * 0.25, bi as f64 * 0.25);
            let x: Vec<u32> = (0..len as u32).map(|k| start + 3 * k).collect();
            let post = posterior(t99(), &x, alpha, beta).unwrap();
            let total: f64 = post.masses.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
            for (h, m) in t99().hypotheses().iter().zip(&post.masses) {
                if !h.support.contains_all(&x) {
                    prop_assert_eq!(*m, 0.0);
                }
            }
            let q = predictive(&post);
            prop_assert!(q.values.iter().all(|v| (0.0..=1.0).contains(v)));
            for &y in &x {
                prop_assert_eq!(q.at(y), 1.0);
            }
        }
    }
}
