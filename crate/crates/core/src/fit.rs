//! Least-squares fit of `(α, β)` to pooled prediction readouts.
//!
//! The loss is the mean over presentations of the mean squared error between
//! the readout curve and the family's predictive on the valid targets. It is
//! minimized in `(ln α, ln β)`: an exhaustive coarse grid followed by a
//! Nelder-Mead refinement started at the best grid point.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bayes::log_weight;
use crate::error::{Error, Result};
use crate::math;
use crate::registry::{HypothesisSpace, Task};
use crate::stimuli::Presentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScopeKind {
    /// Each stimulus set at its longest configured prefix.
    Full,
    /// Sets with at least `n` examples, truncated to the first `n`.
    Prefix(usize),
}

impl ScopeKind {
    pub fn name(self) -> String {
        match self {
            ScopeKind::Full => "full".into(),
            ScopeKind::Prefix(n) => format!("n{n}"),
        }
    }

    pub fn parse(s: &str) -> Option<ScopeKind> {
        match s {
            "full" => Some(ScopeKind::Full),
            _ => {
                let n: usize = s.strip_prefix('n')?.parse().ok()?;
                (1..=crate::stimuli::MAX_PREFIX).contains(&n).then_some(ScopeKind::Prefix(n))
            }
        }
    }
}

/// Which presentations enter one fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitScope {
    pub kind: ScopeKind,
    /// Task sources pooled together; empty means every source present.
    pub sources: Vec<Task>,
}

impl FitScope {
    pub fn new(kind: ScopeKind) -> Self {
        FitScope {
            kind,
            sources: Vec::new(),
        }
    }

    pub fn includes(&self, p: &Presentation) -> bool {
        if !self.sources.is_empty() && !self.sources.contains(&p.source) {
            return false;
        }
        match self.kind {
            ScopeKind::Full => p.is_full(),
            ScopeKind::Prefix(n) => p.set_len >= n && p.n == n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FitConfig {
    /// Grid bounds and spacing in `ln α` and `ln β`.
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_step: f64,
    /// Stop when the simplex diameter in log space drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Drop the observed examples from the valid target sets.
    pub exclude_examples: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            grid_min: -3.0,
            grid_max: 3.0,
            grid_step: 0.25,
            tolerance: 1e-6,
            max_iterations: 500,
            exclude_examples: false,
        }
    }
}

/// One presentation paired with its readout curve.
#[derive(Debug, Clone, Copy)]
pub struct FitItem<'a> {
    pub space: &'a HypothesisSpace,
    pub presentation: &'a Presentation,
    pub curve: &'a [f64],
}

#[derive(Debug, Clone)]
struct Prepared {
    n_examples: usize,
    ln_prior: Vec<f64>,
    ln_size: Vec<f64>,
    /// Target slots covered by each compatible hypothesis, flattened.
    members: Vec<u16>,
    member_ends: Vec<usize>,
    /// Slots pinned to 1 (observed examples that remain valid targets).
    pinned: Vec<u16>,
    observed: Vec<f64>,
}

/// Pooled presentations, preprocessed for repeated loss evaluation.
#[derive(Debug, Clone)]
pub struct FitProblem {
    items: Vec<Prepared>,
    /// Presentations left out of the pool, with the reason.
    pub excluded: Vec<String>,
}

impl FitProblem {
    pub fn new(items: &[FitItem<'_>], config: &FitConfig) -> Result<Self> {
        let mut prepared = Vec::new();
        let mut excluded = Vec::new();
        for item in items {
            let d = item.space.d();
            let p = item.presentation;
            if item.curve.len() != d as usize {
                return Err(Error::LengthMismatch {
                    expected: d as usize,
                    found: item.curve.len(),
                });
            }
            crate::bayes::validate_examples(&p.examples, d)?;
            let mut slot = vec![u16::MAX; d as usize];
            let mut observed = Vec::new();
            for y in 1..=d {
                if config.exclude_examples && p.examples.contains(&y) {
                    continue;
                }
                slot[(y - 1) as usize] = observed.len() as u16;
                observed.push(item.curve[(y - 1) as usize]);
            }
            if observed.is_empty() {
                excluded.push(format!("{}/{} n={}: no valid targets", p.source, p.stimulus_id, p.n));
                continue;
            }
            let mut prep = Prepared {
                n_examples: p.examples.len(),
                ln_prior: Vec::new(),
                ln_size: Vec::new(),
                members: Vec::new(),
                member_ends: Vec::new(),
                pinned: p
                    .examples
                    .iter()
                    .map(|&x| slot[(x - 1) as usize])
                    .filter(|&s| s != u16::MAX)
                    .collect(),
                observed,
            };
            for (h, &prior) in item.space.hypotheses().iter().zip(item.space.prior()) {
                if !h.support.contains_all(&p.examples) {
                    continue;
                }
                prep.ln_prior.push(math::ln(prior));
                prep.ln_size.push(math::ln(h.size() as f64));
                prep.members.extend(
                    h.support
                        .iter()
                        .map(|y| slot[(y - 1) as usize])
                        .filter(|&s| s != u16::MAX),
                );
                prep.member_ends.push(prep.members.len());
            }
            if prep.ln_prior.is_empty() {
                excluded.push(format!(
                    "{}/{} n={}: no compatible hypothesis",
                    p.source, p.stimulus_id, p.n
                ));
                continue;
            }
            prepared.push(prep);
        }
        Ok(FitProblem {
            items: prepared,
            excluded,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Loss at `(α, β)`. `NaN` for an empty pool.
    pub fn objective(&self, alpha: f64, beta: f64) -> f64 {
        let mut total = 0.0;
        let mut weights = Vec::new();
        let mut q = Vec::new();
        for item in &self.items {
            weights.clear();
            let mut max = f64::NEG_INFINITY;
            for (lp, ls) in item.ln_prior.iter().zip(&item.ln_size) {
                let w = log_weight(*lp, *ls, item.n_examples, alpha, beta);
                max = max.max(w);
                weights.push(w);
            }
            let mut norm = 0.0;
            for w in weights.iter_mut() {
                *w = math::exp(*w - max);
                norm += *w;
            }
            q.clear();
            q.resize(item.observed.len(), 0.0);
            let mut start = 0;
            for (w, &end) in weights.iter().zip(&item.member_ends) {
                let m = w / norm;
                for &s in &item.members[start..end] {
                    q[s as usize] += m;
                }
                start = end;
            }
            for &s in &item.pinned {
                q[s as usize] = 1.0;
            }
            let sse: f64 = q
                .iter()
                .zip(&item.observed)
                .map(|(qh, qo)| {
                    let r = qo - qh.min(1.0);
                    r * r
                })
                .sum();
            total += sse / item.observed.len() as f64;
        }
        total / self.items.len() as f64
    }

    fn objective_log(&self, theta: [f64; 2]) -> f64 {
        let v = self.objective(math::exp(theta[0]), math::exp(theta[1]));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

/// Loss `L(α, β)` over the given items.
pub fn objective(items: &[FitItem<'_>], alpha: f64, beta: f64, config: &FitConfig) -> Result<f64> {
    let problem = FitProblem::new(items, config)?;
    if problem.is_empty() {
        return Err(Error::EmptyPool);
    }
    Ok(problem.objective(alpha, beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub loss: f64,
    pub n_presentations: usize,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best grid point `(α, β, loss)` the refinement started from.
    pub grid_best: (f64, f64, f64),
    pub excluded: Vec<String>,
}

impl FitResult {
    pub fn log_alpha_over_beta(&self) -> f64 {
        math::ln(self.alpha / self.beta)
    }
}

/// Minimizes the loss over the presentations selected by `scope`.
pub fn fit(items: &[FitItem<'_>], scope: &FitScope, config: &FitConfig) -> Result<FitResult> {
    let selected: Vec<FitItem<'_>> = items
        .iter()
        .copied()
        .filter(|it| scope.includes(it.presentation))
        .collect();
    let problem = FitProblem::new(&selected, config)?;
    if problem.is_empty() {
        return Err(Error::EmptyPool);
    }
    minimize(&problem, config)
}

/// Fits an already-prepared pool.
pub fn minimize(problem: &FitProblem, config: &FitConfig) -> Result<FitResult> {
    if problem.is_empty() {
        return Err(Error::EmptyPool);
    }
    if !(config.grid_step > 0.0 && config.grid_max >= config.grid_min) {
        return Err(Error::InvalidParameter("fit grid"));
    }
    let steps = ((config.grid_max - config.grid_min) / config.grid_step + 1e-9) as usize;
    let axis: Vec<f64> = (0..=steps)
        .map(|i| config.grid_min + i as f64 * config.grid_step)
        .collect();
    let mut evaluations = 0;
    let mut best = ([axis[0], axis[0]], f64::INFINITY);
    for &la in &axis {
        for &lb in &axis {
            let v = problem.objective_log([la, lb]);
            evaluations += 1;
            if v < best.1 {
                best = ([la, lb], v);
            }
        }
    }
    let grid_best = (math::exp(best.0[0]), math::exp(best.0[1]), best.1);
    let nm = nelder_mead(
        |t| problem.objective_log(t),
        best.0,
        config.grid_step,
        config.tolerance,
        config.max_iterations,
    );
    evaluations += nm.evaluations;
    let (theta, loss) = if nm.value <= best.1 {
        (nm.point, nm.value)
    } else {
        best
    };
    Ok(FitResult {
        alpha: math::exp(theta[0]),
        beta: math::exp(theta[1]),
        loss,
        n_presentations: problem.len(),
        converged: nm.converged,
        iterations: nm.iterations,
        evaluations,
        grid_best,
        excluded: problem.excluded.clone(),
    })
}

/// One entry of an example-count trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub n: usize,
    /// `Err` holds the reason the scope was skipped.
    pub result: core::result::Result<FitResult, String>,
}

/// Fits each prefix scope `n = 1..=4` separately.
pub fn fit_trajectory(items: &[FitItem<'_>], sources: &[Task], config: &FitConfig) -> Vec<TrajectoryPoint> {
    (1..=crate::stimuli::MAX_PREFIX)
        .map(|n| {
            let scope = FitScope {
                kind: ScopeKind::Prefix(n),
                sources: sources.to_vec(),
            };
            let result = match fit(items, &scope, config) {
                Ok(r) => Ok(r),
                Err(Error::EmptyPool) => Err(format!("no presentations with n={n}")),
                Err(e) => Err(format!("{e}")),
            };
            TrajectoryPoint { n, result }
        })
        .collect()
}

struct NelderMeadOutcome {
    point: [f64; 2],
    value: f64,
    converged: bool,
    iterations: usize,
    evaluations: usize,
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    step: f64,
    tolerance: f64,
    max_iterations: usize,
) -> NelderMeadOutcome {
    let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut values = simplex.map(&f);
    let mut evaluations = 3;
    let mut iterations = 0;
    let mut converged = false;
    loop {
        // order best..worst
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);

        let diameter = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .map(|(i, j)| {
                let dx = simplex[i][0] - simplex[j][0];
                let dy = simplex[i][1] - simplex[j][1];
                math::sqrt(dx * dx + dy * dy)
            })
            .fold(0.0, f64::max);
        if diameter < tolerance {
            converged = true;
            break;
        }
        if iterations >= max_iterations {
            break;
        }
        iterations += 1;

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let reflected = add(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        evaluations += 1;
        if fr < values[0] {
            let expanded = add(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            evaluations += 1;
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
            continue;
        }
        if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[2] {
            let c = add(centroid, reflected, 0.5);
            (c, f(c))
        } else {
            let c = add(centroid, simplex[2], 0.5);
            (c, f(c))
        };
        evaluations += 1;
        if fc < values[2].min(fr) {
            simplex[2] = contracted;
            values[2] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..3 {
            simplex[i] = add(simplex[0], simplex[i], 0.5);
            values[i] = f(simplex[i]);
            evaluations += 1;
        }
    }
    NelderMeadOutcome {
        point: simplex[0],
        value: values[0],
        converged,
        iterations,
        evaluations,
    }
}
