//! Cross-measurement projection and comparison metrics.
//!
//! Divergences treat a yes-probability curve as a distribution over the domain
//! by normalizing it to sum 1. JSD is base 2 and returned as a distance
//! (square root of the divergence). KL and entropy are in bits.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bayes::posterior;
use crate::error::{Error, Result};
use crate::math;
use crate::readout::{LabelReadout, Measurement};
use crate::registry::HypothesisSpace;

/// Floor added to every reference bin before normalizing for KL.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Weighted-label readout mapped into predictive space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedPredictive {
    pub curve: Vec<f64>,
    pub measurement: Measurement,
    pub matched_mass: f64,
    pub unmatched_mass: f64,
}

/// `q̃(y) = Σ_ℓ w(ℓ) · 1[y ∈ S(ℓ)]` over matched labels.
pub fn project(readout: &LabelReadout) -> Result<ProjectedPredictive> {
    if !(readout.matched_mass > 0.0) {
        return Err(Error::NoMatchedLabels);
    }
    let mut curve = vec![0.0; readout.d as usize];
    for (entry, w) in readout.matched() {
        if let Some((support, _)) = &entry.support {
            for y in support.iter() {
                curve[(y - 1) as usize] += w;
            }
        }
    }
    for v in &mut curve {
        *v = v.min(1.0);
    }
    Ok(ProjectedPredictive {
        curve,
        measurement: readout.measurement,
        matched_mass: readout.matched_mass,
        unmatched_mass: readout.unmatched_mass,
    })
}

fn normalized(curve: &[f64], what: &'static str) -> Result<Vec<f64>> {
    if curve.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Degenerate(what));
    }
    let total: f64 = curve.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate(what));
    }
    Ok(curve.iter().map(|v| v / total).collect())
}

fn kl_bits(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| pi * math::log2(pi / qi))
        .sum()
}

/// Base-2 Jensen-Shannon distance between the normalized curves, in `[0, 1]`.
pub fn jsd(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let p = normalized(a, "first curve")?;
    let q = normalized(b, "second curve")?;
    let m: Vec<f64> = p.iter().zip(&q).map(|(x, y)| 0.5 * (x + y)).collect();
    let div = 0.5 * kl_bits(&p, &m) + 0.5 * kl_bits(&q, &m);
    Ok(math::sqrt(div.clamp(0.0, 1.0)))
}

/// `KL(model ‖ reference)` in bits; `epsilon` is added to each reference bin first.
pub fn kl_to_reference(model: &[f64], reference: &[f64], epsilon: f64) -> Result<f64> {
    if model.len() != reference.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            found: model.len(),
        });
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter("epsilon must be non-negative"));
    }
    let p = normalized(model, "model curve")?;
    // the floor only keeps the divergence finite; identical distributions stay at 0
    if normalized(reference, "reference curve")? == p {
        return Ok(0.0);
    }
    let floored: Vec<f64> = reference.iter().map(|r| r + epsilon).collect();
    let q = normalized(&floored, "reference curve")?;
    Ok(kl_bits(&p, &q).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Top1Summary {
    pub label: String,
    /// Sum-scaled weight of the top label among matched labels.
    pub weight: f64,
    pub support_fraction: f64,
    pub example_consistent: bool,
    pub is_rule: bool,
}

/// Top-weighted matched label. Ties go to the smaller support, then the
/// lexicographically smaller label.
pub fn top1(readout: &LabelReadout, examples: &[u32]) -> Result<Top1Summary> {
    let mut best: Option<(&crate::readout::LabelEntry, f64)> = None;
    for (entry, w) in readout.matched() {
        let better = match best {
            None => true,
            Some((b, bw)) => {
                let size = |e: &crate::readout::LabelEntry| e.support.as_ref().map_or(0, |(s, _)| s.len());
                w > bw
                    || (w == bw
                        && (size(entry) < size(b) || (size(entry) == size(b) && entry.label < b.label)))
            }
        };
        if better {
            best = Some((entry, w));
        }
    }
    let (entry, weight) = best.ok_or(Error::NoMatchedLabels)?;
    let (support, kind) = entry.support.as_ref().ok_or(Error::NoMatchedLabels)?;
    Ok(Top1Summary {
        label: entry.label.clone(),
        weight,
        support_fraction: support.len() as f64 / readout.d as f64,
        example_consistent: support.contains_all(examples),
        is_rule: *kind == crate::registry::HypothesisKind::Rule,
    })
}

/// Larger-domain extrapolation diagnostics for one presentation.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainExtensionReport {
    /// Share of the normalized `d = 200` curve on `101..=200`.
    pub extension_mass: f64,
    /// `KL(curve_100 ‖ curve_200 renormalized on 1..=100)`, bits.
    pub shape_kl: f64,
    /// Rule the examples imply: the top rule of the `d = 200` reference.
    pub rule_label: Option<String>,
    /// Mean raw `q(y)` over rule-consistent targets in `101..=200`.
    pub rule_mean: Option<f64>,
    /// Mean raw `q(y)` over the other targets in `101..=200`.
    pub nonrule_mean: Option<f64>,
}

pub fn domain_extension(
    curve_100: &[f64],
    curve_200: &[f64],
    examples: &[u32],
    space_200: &HypothesisSpace,
    epsilon: f64,
) -> Result<DomainExtensionReport> {
    if curve_100.len() != 100 {
        return Err(Error::LengthMismatch {
            expected: 100,
            found: curve_100.len(),
        });
    }
    if curve_200.len() != 200 || space_200.d() != 200 {
        return Err(Error::LengthMismatch {
            expected: 200,
            found: curve_200.len(),
        });
    }
    crate::bayes::validate_examples(examples, 100)?;
    let whole = normalized(curve_200, "d=200 curve")?;
    let extension_mass: f64 = whole[100..].iter().sum();
    let shape_kl = kl_to_reference(curve_100, &curve_200[..100], epsilon)?;

    let reference = posterior(space_200, examples, 1.0, 1.0).ok();
    let rule = reference.as_ref().and_then(|post| {
        space_200
            .hypotheses()
            .iter()
            .zip(&post.masses)
            .filter(|(h, m)| h.is_rule() && **m > 0.0)
            .fold(None, |best: Option<(&crate::registry::Hypothesis, f64)>, (h, &m)| match best {
                Some((_, bm)) if bm >= m => best,
                _ => Some((h, m)),
            })
            .map(|(h, _)| h)
    });
    let mean = |xs: &[f64]| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let (mut on_rule, mut off_rule) = (Vec::new(), Vec::new());
    for y in 101..=200u32 {
        let v = curve_200[(y - 1) as usize];
        if rule.is_some_and(|h| h.support.contains(y)) {
            on_rule.push(v);
        } else {
            off_rule.push(v);
        }
    }
    Ok(DomainExtensionReport {
        extension_mass,
        shape_kl,
        rule_label: rule.map(|h| h.label.clone()),
        rule_mean: mean(&on_rule),
        nonrule_mean: mean(&off_rule),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::readout::normalize_labels;
    use crate::registry::{build_space, Domain, Task};
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn labels(pairs: &[(&str, f64)]) -> LabelReadout {
        let raw: Vec<(String, f64)> = pairs.iter().map(|(l, c)| (l.to_string(), *c)).collect();
        normalize_labels(&raw, None, Measurement::Generation, 100).unwrap()
    }

    #[test]
    fn projection_of_single_label() {
        let p = project(&labels(&[("even numbers", 1.0)])).unwrap();
        for y in 1..=100u32 {
            assert_eq!(p.curve[(y - 1) as usize], if y % 2 == 0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn projection_mixture() {
        let p = project(&labels(&[("powers of 2", 0.5), ("even numbers", 0.5)])).unwrap();
        assert_eq!(p.curve[3], 1.0);
        assert_eq!(p.curve[5], 0.5);
        assert_eq!(p.curve[6], 0.0);
    }

    #[test]
    fn projection_needs_matched_mass() {
        let r = labels(&[("vibes", 1.0)]);
        assert_eq!(project(&r).unwrap_err(), Error::NoMatchedLabels);
        assert_eq!(top1(&r, &[1]).unwrap_err(), Error::NoMatchedLabels);
    }

    #[test]
    fn jsd_cases() {
        let mut a = vec![0.0; 100];
        let mut b = vec![0.0; 100];
        a[0] = 1.0;
        b[1] = 1.0;
        assert_eq!(jsd(&a, &b).unwrap(), 1.0);
        assert_eq!(jsd(&a, &a).unwrap(), 0.0);
        assert!(jsd(&a, &vec![0.0; 100]).is_err());

        // closed form: P uniform on evens, Q uniform on all
        let evens: Vec<f64> = (1..=100).map(|y| if y % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let all = vec![1.0; 100];
        let kl_pm = (4.0f64 / 3.0).log2();
        let kl_qm = 0.5 * (2.0f64 / 3.0).log2() + 0.5;
        let expected = (0.5 * kl_pm + 0.5 * kl_qm).sqrt();
        assert!((jsd(&evens, &all).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn kl_cases() {
        let uniform = vec![0.4; 100];
        assert_eq!(kl_to_reference(&uniform, &uniform, DEFAULT_EPSILON).unwrap(), 0.0);
        let mut sparse = vec![0.0; 100];
        sparse[3] = 0.5;
        sparse[7] = 1.0;
        assert_eq!(kl_to_reference(&sparse, &sparse, DEFAULT_EPSILON).unwrap(), 0.0);
        let mut onehot = vec![0.0; 100];
        onehot[0] = 1.0;
        let eps = 1e-9;
        let z = 1.0 + 100.0 * eps;
        let expected: f64 = (0..100)
            .map(|i| {
                let r: f64 = if i == 0 { (1.0 + eps) / z } else { eps / z };
                0.01 * (0.01 / r).log2()
            })
            .sum();
        let got = kl_to_reference(&uniform, &onehot, eps).unwrap();
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
        assert!(kl_to_reference(&vec![0.0; 100], &uniform, eps).is_err());
    }

    #[test]
    fn top1_cases() {
        let r = labels(&[("even numbers", 0.7), ("primes", 0.3)]);
        let t = top1(&r, &[2, 4]).unwrap();
        assert_eq!(t.support_fraction, 0.5);
        assert!(t.example_consistent && t.is_rule);

        let x = [16, 8, 2, 64];
        let t = top1(&labels(&[("powers of 2", 0.9), ("interval 1..20", 0.1)]), &x).unwrap();
        assert!(t.example_consistent && t.is_rule);
        assert_eq!(t.weight, 0.9);
        let t = top1(&labels(&[("interval 1..20", 1.0)]), &x).unwrap();
        assert!(!t.example_consistent && !t.is_rule);

        // tie: smaller support wins
        let t = top1(&labels(&[("even numbers", 0.5), ("powers of 2", 0.5)]), &x).unwrap();
        assert_eq!(t.label, "powers of 2");
    }

    #[test]
    fn extension_basics() {
        let space = build_space(Task::Tenenbaum99, Domain::new(200).unwrap()).unwrap();
        let c100: Vec<f64> = (1..=100).map(|y| if y % 2 == 0 { 0.8 } else { 0.1 }).collect();
        let mut c200 = vec![0.0; 200];
        for (i, v) in c100.iter().enumerate() {
            c200[i] = 0.5 * v;
        }
        let r = domain_extension(&c100, &c200, &[16, 8, 2, 64], &space, DEFAULT_EPSILON).unwrap();
        assert_eq!(r.extension_mass, 0.0);
        assert!(r.shape_kl.abs() < 1e-12);
        assert_eq!(r.rule_label.as_deref(), Some("powers of 2"));
        assert_eq!(r.rule_mean, Some(0.0));
        assert!(domain_extension(&c100, &c200, &[150], &space, DEFAULT_EPSILON).is_err());
    }

    fn curve() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..1.0, 20).prop_filter("positive mass", |c| c.iter().sum::<f64>() > 1e-6)
    }

    proptest! {
        #[test]
        fn jsd_is_a_bounded_symmetric_distance(a in curve(), b in curve(), c in curve()) {
            let ab = jsd(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!((ab - jsd(&b, &a).unwrap()).abs() < 1e-12);
            prop_assert!(jsd(&a, &a).unwrap() < 1e-7);
            let ac = jsd(&a, &c).unwrap();
            let cb = jsd(&c, &b).unwrap();
            prop_assert!(ab <= ac + cb + 1e-9);
        }

        #[test]
        fn kl_non_negative(a in curve(), b in curve(), scale in 0.1f64..10.0) {
            prop_assert!(kl_to_reference(&a, &b, DEFAULT_EPSILON).unwrap() >= 0.0);
            let scaled: Vec<f64> = a.iter().map(|v| v * scale).collect();
            prop_assert!(kl_to_reference(&scaled, &a, 0.0).unwrap() < 1e-12);
        }
    }
}
