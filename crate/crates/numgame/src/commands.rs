//! Subcommand implementations. Each writes its outputs plus a run manifest
//! into the output directory and returns what should be shown to the user.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use numgame_core::agent::{emit_labels, emit_prediction, AgentKind, AgentSpec};
use numgame_core::bayes::posterior_entropy;
use numgame_core::fit::{fit as fit_scope, FitItem, FitScope, ScopeKind};
use numgame_core::metrics::{domain_extension, jsd, kl_to_reference, project, top1};
use numgame_core::readout::{Condition, Measurement};
use numgame_core::registry::SYNONYM_TABLE_VERSION;
use numgame_core::stimuli::{expand_prefixes, Presentation, MAX_PREFIX};
use numgame_core::{build_space, Domain, HypothesisSpace, Task};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::manifest::{validate_manifest, Manifest};
use crate::readout_file::{read_jsonl, write_jsonl, CellKey, Decoded, LabelRecord, Located, Payload, ReadoutRecord};
use crate::space_file::{golden_counts, SpaceFile, SPACE_FORMAT_VERSION};
use crate::stimuli_file::{load_sets, Catalog, StimulusFile};
use crate::tables::{write_csv, FitRow, MetricsRow};

/// Result of a subcommand.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Files written, including the run manifest.
    pub outputs: Vec<PathBuf>,
    /// Lines for standard output.
    pub summary: Vec<String>,
    /// Warnings: skipped records, excluded presentations.
    pub notes: Vec<String>,
    /// Set when the command ran but validation failed (exit code 1).
    pub failure: Option<String>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    arguments: serde_json::Value,
    config: &'a RunConfig,
    synonym_table_version: u32,
    space_format_version: u32,
    outputs: Vec<String>,
    notes: &'a [String],
    failure: Option<&'a str>,
}

fn finish(cfg: &RunConfig, out: &Path, command: &str, arguments: serde_json::Value, mut outcome: Outcome) -> Result<Outcome> {
    let path = out.join(format!("{command}.run.json"));
    let manifest = RunManifest {
        tool: "numgame",
        version: env!("CARGO_PKG_VERSION"),
        command,
        arguments,
        config: cfg,
        synonym_table_version: SYNONYM_TABLE_VERSION,
        space_format_version: SPACE_FORMAT_VERSION,
        outputs: outcome
            .outputs
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
        notes: &outcome.notes,
        failure: outcome.failure.as_deref(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::json(&path, e))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    outcome.outputs.push(path);
    Ok(outcome)
}

fn space_for(task: Task, d: u32) -> Result<HypothesisSpace> {
    if !task.is_configured(d) {
        return Err(Error::Usage(format!("{} is not configured for d={d}", task.as_str())));
    }
    Ok(build_space(task, Domain::new(d)?)?)
}

/// Builds and exports a space, checking it against the golden counts.
pub fn space(cfg: &RunConfig, task: Task, d: u32) -> Result<Outcome> {
    let out = cfg.prepare([])?;
    let space = space_for(task, d)?;
    let path = out.join(format!("space_{}_d{d}.json", task.as_str()));
    SpaceFile::from_space(&space).write(&path)?;

    let (rules, total) = (space.rule_count(), space.len());
    let mut outcome = Outcome {
        outputs: vec![path],
        ..Outcome::default()
    };
    outcome.summary.push(format!(
        "{} d={d}: {rules} rules, {} intervals, {total} total, {} prompt rule labels",
        task.as_str(),
        space.interval_count(),
        space.prompt_rules().len()
    ));
    match golden_counts(task, d) {
        Some(golden) if golden != (rules, total) => {
            outcome.failure = Some(format!(
                "counts {rules}/{total} differ from the expected {}/{}",
                golden.0, golden.1
            ));
        }
        Some(_) => outcome.summary.push("counts match the expected table".into()),
        None => outcome.notes.push(format!("no expected counts recorded for {} d={d}", task.as_str())),
    }
    finish(cfg, &out, "space", serde_json::json!({ "task": task, "d": d }), outcome)
}

fn stimulus_file_for(cfg: &RunConfig, task: Task) -> Result<Option<PathBuf>> {
    for path in &cfg.stimuli {
        if StimulusFile::read(path)?.source == task {
            return Ok(Some(path.clone()));
        }
    }
    Ok(None)
}

fn presentations(cfg: &RunConfig, task: Task) -> Result<Vec<Presentation>> {
    let file = stimulus_file_for(cfg, task)?;
    let sets = load_sets(task, file.as_deref(), &cfg.classifier)?;
    Ok(expand_prefixes(&sets, MAX_PREFIX))
}

/// What a synthetic agent should emit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentRun {
    pub spec: AgentSpec,
    pub task: Task,
    pub d: u32,
    pub measurement: Measurement,
    /// Label budget for generation readouts.
    pub k: usize,
    pub condition: Condition,
    pub thinking: bool,
    pub file_name: String,
}

fn emit(cfg: &RunConfig, out: &Path, run: &AgentRun) -> Result<Outcome> {
    if run.measurement == Measurement::Evaluation {
        return Err(Error::Usage(
            "synthetic agents emit prediction or generation readouts".into(),
        ));
    }
    let space = space_for(run.task, run.d)?;
    let presentations = presentations(cfg, run.task)?;
    let emitted: Vec<(usize, Option<ReadoutRecord>)> = cfg.install(|| {
        presentations
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let payload = match run.measurement {
                    Measurement::Prediction => emit_prediction(&run.spec, &space, p)?.map(|r| Payload::Curve {
                        provenance: r.provenance,
                        values: r.curve,
                    }),
                    _ => emit_labels(&run.spec, &space, p, run.k)?.map(|r| Payload::Labels {
                        entries: r
                            .entries
                            .into_iter()
                            .map(|e| LabelRecord {
                                label: e.label,
                                confidence: e.confidence,
                            })
                            .collect(),
                    }),
                };
                Ok((
                    i,
                    payload.map(|payload| ReadoutRecord {
                        task: run.task,
                        d: run.d,
                        stimulus_id: p.stimulus_id.clone(),
                        n: p.n,
                        examples: Some(p.examples.clone()),
                        measurement: run.measurement,
                        condition: run.condition,
                        thinking: run.thinking,
                        payload,
                    }),
                ))
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut outcome = Outcome::default();
    let mut records = Vec::new();
    for (i, record) in emitted {
        match record {
            Some(r) => records.push(r),
            None => {
                let p = &presentations[i];
                outcome
                    .notes
                    .push(format!("skipped {}#n{}: no compatible hypothesis", p.stimulus_id, p.n));
            }
        }
    }
    let path = out.join(&run.file_name);
    write_jsonl(&path, &records)?;
    outcome.summary.push(format!(
        "{} {} records for {} d={} -> {}",
        records.len(),
        run.measurement,
        run.task.as_str(),
        run.d,
        path.display()
    ));
    outcome.outputs.push(path);
    Ok(outcome)
}

/// Emits the `(α, β) = (1, 1)` predictive for every presentation.
pub fn reference(cfg: &RunConfig, task: Task, d: u32) -> Result<Outcome> {
    let out = cfg.prepare([])?;
    let run = AgentRun {
        spec: AgentSpec::bayesian(1.0, 1.0),
        task,
        d,
        measurement: Measurement::Prediction,
        k: 1,
        condition: Condition::Default,
        thinking: false,
        file_name: format!("reference_{}_d{d}.jsonl", task.as_str()),
    };
    let outcome = emit(cfg, &out, &run)?;
    finish(cfg, &out, "reference", serde_json::json!({ "task": task, "d": d }), outcome)
}

/// Emits readouts from a synthetic agent.
pub fn agent(cfg: &RunConfig, run: &AgentRun) -> Result<Outcome> {
    let out = cfg.prepare([])?;
    let spec = AgentSpec::new(run.spec.kind, run.spec.noise, run.spec.seed)?;
    if run.k == 0 {
        return Err(Error::Usage("k must be at least 1".into()));
    }
    let run = AgentRun { spec, ..run.clone() };
    let outcome = emit(cfg, &out, &run)?;
    let arguments = serde_json::to_value(&run).map_err(|e| Error::json(&out, e))?;
    finish(cfg, &out, "agent", arguments, outcome)
}

/// Checks readout files against a manifest and writes `coverage_report.json`.
pub fn ingest_validate(cfg: &RunConfig, manifest_path: &Path, inputs: &[PathBuf]) -> Result<Outcome> {
    let out = cfg.prepare(inputs.iter().map(PathBuf::as_path).chain([manifest_path]))?;
    let manifest = Manifest::read(manifest_path)?;
    let parsed = cfg.install(|| inputs.par_iter().map(|p| read_jsonl(p)).collect::<Result<Vec<_>>>())??;
    let report = cfg.install(|| validate_manifest(&manifest, &parsed, &cfg.classifier))??;

    let path = out.join("coverage_report.json");
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::json(&path, e))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;

    let mut outcome = Outcome {
        outputs: vec![path],
        ..Outcome::default()
    };
    outcome.summary.push(format!(
        "{} d={}: {}/{} cells present, {} missing, {} duplicate, {} domain mismatch, {} invalid, {} unexpected",
        report.task.as_str(),
        report.d,
        report.present,
        report.expected,
        report.missing.len(),
        report.duplicates.len(),
        report.domain_mismatches.len(),
        report.invalid.len(),
        report.unexpected.len()
    ));
    for m in &report.missing_presentations {
        outcome.notes.push(format!("missing presentation {m}"));
    }
    for dup in &report.duplicates {
        let at: Vec<String> = dup.locations.iter().map(|l| l.to_string()).collect();
        outcome.notes.push(format!("duplicate {} at {}", dup.cell, at.join(", ")));
    }
    if !report.ok {
        outcome.failure = Some("coverage check failed".into());
    }
    let arguments = serde_json::json!({ "manifest": manifest_path, "inputs": inputs });
    finish(cfg, &out, "ingest-validate", arguments, outcome)
}

/// Spaces and presentations needed to interpret a set of records.
struct Context {
    catalog: Catalog,
    spaces: BTreeMap<(Task, u32), HypothesisSpace>,
}

impl Context {
    fn new<'a>(cfg: &RunConfig, records: impl IntoIterator<Item = &'a ReadoutRecord>) -> Result<Self> {
        let mut catalog = Catalog::new(&load_sets(Task::Tenenbaum99, None, &cfg.classifier)?);
        for path in &cfg.stimuli {
            let file = StimulusFile::read(path)?;
            catalog.extend(&file.into_sets(&cfg.classifier)?);
        }
        let mut spaces = BTreeMap::new();
        for r in records {
            let key = (r.task, r.d);
            if !spaces.contains_key(&key) && r.task.is_configured(r.d) {
                spaces.insert(key, build_space(r.task, Domain::new(r.d)?)?);
            }
        }
        Ok(Context { catalog, spaces })
    }

    fn resolve(&self, r: &ReadoutRecord) -> std::result::Result<(&Presentation, &HypothesisSpace), String> {
        let space = self
            .spaces
            .get(&(r.task, r.d))
            .ok_or_else(|| format!("{} is not configured for d={}", r.task.as_str(), r.d))?;
        let p = self.catalog.get(r.task, &r.stimulus_id, r.n).ok_or_else(|| {
            format!(
                "unknown presentation {}#n{} for {}",
                r.stimulus_id,
                r.n,
                r.task.as_str()
            )
        })?;
        Ok((p, space))
    }
}

fn load_records(cfg: &RunConfig, paths: &[PathBuf]) -> Result<Vec<Located<ReadoutRecord>>> {
    let parsed = cfg.install(|| paths.par_iter().map(|p| read_jsonl(p)).collect::<Result<Vec<_>>>())??;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for file in parsed {
        errors.extend(file.errors.into_iter().map(|e| format!("{}: {}", e.at, e.error)));
        records.extend(file.records.into_iter().filter(|r| cfg.keeps(r.value.condition)));
    }
    if !errors.is_empty() {
        return Err(Error::Validation(format!("malformed readout lines:\n  {}", errors.join("\n  "))));
    }
    Ok(records)
}

/// A decoded record with its resolved presentation.
struct Resolved<'c> {
    key: CellKey,
    presentation: &'c Presentation,
    space: &'c HypothesisSpace,
    decoded: Decoded,
}

fn resolve_all<'c>(
    cfg: &RunConfig,
    ctx: &'c Context,
    records: &[Located<ReadoutRecord>],
) -> Result<Vec<std::result::Result<Resolved<'c>, String>>> {
    cfg.install(|| {
        records
            .par_iter()
            .map(|r| {
                let (presentation, space) = ctx.resolve(&r.value).map_err(|e| format!("{}: {e}", r.at))?;
                let decoded = r
                    .value
                    .decode(presentation, space)
                    .map_err(|e| format!("{}: {e}", r.at))?;
                Ok(Resolved {
                    key: r.value.key(),
                    presentation,
                    space,
                    decoded,
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct FitGroup {
    tasks: Vec<Task>,
    d: u32,
    condition: Condition,
    thinking: bool,
}

/// Fits `(α, β)` per task (or pooled), domain, condition, thinking setting and scope.
pub fn fit(cfg: &RunConfig, inputs: &[PathBuf]) -> Result<Outcome> {
    let out = cfg.prepare(inputs.iter().map(PathBuf::as_path))?;
    let scopes: Vec<ScopeKind> = cfg
        .scopes
        .iter()
        .map(|s| ScopeKind::parse(s).ok_or_else(|| Error::Usage(format!("unknown fit scope {s:?}"))))
        .collect::<Result<_>>()?;
    if scopes.is_empty() {
        return Err(Error::Usage("no fit scopes selected".into()));
    }
    let records = load_records(cfg, inputs)?;
    let mut outcome = Outcome::default();
    let (curves, others): (Vec<_>, Vec<_>) = records
        .into_iter()
        .partition(|r| r.value.measurement == Measurement::Prediction);
    if !others.is_empty() {
        outcome
            .notes
            .push(format!("ignored {} label readouts; fits use prediction curves", others.len()));
    }
    let ctx = Context::new(cfg, curves.iter().map(|r| &r.value))?;
    let resolved = resolve_all(cfg, &ctx, &curves)?;
    let errors: Vec<&String> = resolved.iter().filter_map(|r| r.as_ref().err()).collect();
    if !errors.is_empty() {
        let lines: Vec<&str> = errors.iter().map(|s| s.as_str()).collect();
        return Err(Error::Validation(format!("unusable prediction records:\n  {}", lines.join("\n  "))));
    }
    let resolved: Vec<Resolved<'_>> = resolved.into_iter().filter_map(|r| r.ok()).collect();

    let mut seen = BTreeMap::new();
    for (i, r) in resolved.iter().enumerate() {
        if let Some(first) = seen.insert(r.key.clone(), i) {
            return Err(Error::Validation(format!(
                "duplicate cell {} ({} and {})",
                r.key, curves[first].at, curves[i].at
            )));
        }
    }

    let mut groups: BTreeMap<FitGroup, Vec<&Resolved<'_>>> = BTreeMap::new();
    let all_tasks: Vec<Task> = {
        let mut t: Vec<Task> = resolved.iter().map(|r| r.key.task).collect();
        t.sort();
        t.dedup();
        t
    };
    for r in &resolved {
        let group = FitGroup {
            tasks: if cfg.pool_tasks { all_tasks.clone() } else { vec![r.key.task] },
            d: r.key.d,
            condition: r.key.condition,
            thinking: r.key.thinking,
        };
        groups.entry(group).or_default().push(r);
    }
    if groups.is_empty() {
        return Err(Error::Validation("no prediction records to fit".into()));
    }

    let jobs: Vec<(&FitGroup, &Vec<&Resolved<'_>>, ScopeKind)> = groups
        .iter()
        .flat_map(|(g, rs)| scopes.iter().map(move |&s| (g, rs, s)))
        .collect();
    let results = cfg.install(|| {
        jobs.par_iter()
            .map(|(group, rs, kind)| {
                let items: Vec<FitItem<'_>> = rs
                    .iter()
                    .map(|r| FitItem {
                        space: r.space,
                        presentation: r.presentation,
                        curve: match &r.decoded {
                            Decoded::Prediction(p) => &p.curve,
                            Decoded::Labels(_) => unreachable!("partitioned above"),
                        },
                    })
                    .collect();
                let scope = FitScope {
                    kind: *kind,
                    sources: group.tasks.clone(),
                };
                fit_scope(&items, &scope, &cfg.fit)
            })
            .collect::<Vec<_>>()
    })?;

    let mut rows = Vec::new();
    for ((group, _, kind), result) in jobs.iter().zip(results) {
        let tasks = group.tasks.iter().map(|t| t.as_str()).collect::<Vec<_>>().join("+");
        let label = format!(
            "{tasks} d={} {} thinking={} {}",
            group.d,
            group.condition,
            group.thinking,
            kind.name()
        );
        match result {
            Ok(r) => {
                outcome.summary.push(format!(
                    "{label}: alpha={:.4} beta={:.4} log(alpha/beta)={:.4} loss={:.3e} n={}",
                    r.alpha,
                    r.beta,
                    r.log_alpha_over_beta(),
                    r.loss,
                    r.n_presentations
                ));
                for e in &r.excluded {
                    outcome.notes.push(format!("{label}: excluded {e}"));
                }
                if !r.converged {
                    outcome.notes.push(format!("{label}: optimizer hit the iteration budget"));
                }
                rows.push(FitRow {
                    tasks,
                    d: group.d,
                    condition: group.condition.to_string(),
                    thinking: group.thinking,
                    scope: kind.name(),
                    alpha: r.alpha,
                    beta: r.beta,
                    log_alpha_over_beta: r.log_alpha_over_beta(),
                    loss: r.loss,
                    n_presentations: r.n_presentations,
                    converged: r.converged,
                });
            }
            Err(numgame_core::Error::EmptyPool) => {
                outcome.notes.push(format!("{label}: empty pool, no fit"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if rows.is_empty() {
        outcome.failure = Some("every selected scope had an empty pool".into());
    }
    let path = out.join("fit.csv");
    write_csv(&path, &rows)?;
    outcome.outputs.push(path);
    let arguments = serde_json::json!({ "inputs": inputs });
    finish(cfg, &out, "fit", arguments, outcome)
}

type PresentationKey = (Task, u32, String, usize);

fn presentation_key(k: &CellKey) -> PresentationKey {
    (k.task, k.d, k.stimulus_id.clone(), k.n)
}

/// Compares readouts with reference curves and writes `metrics.csv`.
pub fn metrics(cfg: &RunConfig, inputs: &[PathBuf], references: &[PathBuf]) -> Result<Outcome> {
    let out = cfg.prepare(inputs.iter().chain(references).map(PathBuf::as_path))?;
    let records = load_records(cfg, inputs)?;
    let ref_cfg = RunConfig {
        conditions: Vec::new(),
        ..cfg.clone()
    };
    let ref_records = load_records(&ref_cfg, references)?;
    let ctx = Context::new(cfg, records.iter().chain(&ref_records).map(|r| &r.value))?;
    let mut outcome = Outcome::default();

    // reference curves by presentation; the first record in key order wins
    let mut reference_curves: BTreeMap<PresentationKey, Vec<f64>> = BTreeMap::new();
    let mut resolved_refs: Vec<_> = resolve_all(cfg, &ctx, &ref_records)?
        .into_iter()
        .filter_map(|r| match r {
            Ok(r) => Some(r),
            Err(e) => {
                outcome.notes.push(format!("reference skipped: {e}"));
                None
            }
        })
        .collect();
    resolved_refs.sort_by(|a, b| a.key.cmp(&b.key));
    for r in resolved_refs {
        if let Decoded::Prediction(p) = r.decoded {
            reference_curves.entry(presentation_key(&r.key)).or_insert(p.curve);
        }
    }

    let mut resolved: Vec<Resolved<'_>> = Vec::new();
    for r in resolve_all(cfg, &ctx, &records)? {
        match r {
            Ok(r) => resolved.push(r),
            Err(e) => outcome.notes.push(format!("skipped: {e}")),
        }
    }
    resolved.sort_by(|a, b| a.key.cmp(&b.key));

    // model curves, for pairing d=200 readouts with their d=100 counterparts
    let curves: Vec<std::result::Result<Vec<f64>, String>> = resolved
        .iter()
        .map(|r| match &r.decoded {
            Decoded::Prediction(p) => Ok(p.curve.clone()),
            Decoded::Labels(l) => project(l).map(|p| p.curve).map_err(|e| e.to_string()),
        })
        .collect();
    let by_key: BTreeMap<&CellKey, usize> = resolved.iter().enumerate().map(|(i, r)| (&r.key, i)).collect();

    let epsilon = cfg.epsilon;
    let rows: Vec<std::result::Result<(MetricsRow, Vec<String>), String>> = cfg.install(|| {
        resolved
            .par_iter()
            .enumerate()
            .map(|(i, r)| {
                let Some(reference) = reference_curves.get(&presentation_key(&r.key)) else {
                    return Err(format!("{}: no reference curve for this presentation", r.key));
                };
                let mut notes = Vec::new();
                let mut row = MetricsRow {
                    task: r.key.task.as_str().into(),
                    d: r.key.d,
                    stimulus_id: r.key.stimulus_id.clone(),
                    n: r.key.n,
                    category: r.presentation.category.as_str().into(),
                    measurement: r.key.measurement.to_string(),
                    condition: r.key.condition.to_string(),
                    thinking: r.key.thinking,
                    jsd: None,
                    kl: None,
                    entropy: None,
                    m_ext: None,
                    shape_kl: None,
                    rule_label: None,
                    rule_mean: None,
                    nonrule_mean: None,
                    top1_label: None,
                    top1_weight: None,
                    top1_support_fraction: None,
                    top1_example_consistent: None,
                    top1_is_rule: None,
                    matched_mass: None,
                    unmatched_mass: None,
                };
                if let Decoded::Labels(l) = &r.decoded {
                    row.matched_mass = Some(l.matched_mass);
                    row.unmatched_mass = Some(l.unmatched_mass);
                    if let Ok(t) = top1(l, &r.presentation.examples) {
                        row.top1_label = Some(t.label);
                        row.top1_weight = Some(t.weight);
                        row.top1_support_fraction = Some(t.support_fraction);
                        row.top1_example_consistent = Some(t.example_consistent);
                        row.top1_is_rule = Some(t.is_rule);
                    }
                }
                let curve = match &curves[i] {
                    Ok(c) => c,
                    Err(e) => {
                        notes.push(format!("{}: no predictive curve ({e})", r.key));
                        return Ok((row, notes));
                    }
                };
                let mut note = |what: &str, e: numgame_core::Error| notes.push(format!("{}: {what} undefined ({e})", r.key));
                match jsd(curve, reference) {
                    Ok(v) => row.jsd = Some(v),
                    Err(e) => note("jsd", e),
                }
                match kl_to_reference(curve, reference, epsilon) {
                    Ok(v) => row.kl = Some(v),
                    Err(e) => note("kl", e),
                }
                match posterior_entropy(curve) {
                    Ok(v) => row.entropy = Some(v),
                    Err(e) => note("entropy", e),
                }
                if r.key.d == 200 {
                    let small = by_key.get(&r.key.with_d(100)).map(|&j| &curves[j]);
                    match small {
                        Some(Ok(c100)) => {
                            match domain_extension(c100, curve, &r.presentation.examples, r.space, epsilon) {
                                Ok(ext) => {
                                    row.m_ext = Some(ext.extension_mass);
                                    row.shape_kl = Some(ext.shape_kl);
                                    row.rule_label = ext.rule_label;
                                    row.rule_mean = ext.rule_mean;
                                    row.nonrule_mean = ext.nonrule_mean;
                                }
                                Err(e) => note("domain extension", e),
                            }
                        }
                        _ => notes.push(format!("{}: no matching d=100 readout, extension skipped", r.key)),
                    }
                }
                Ok((row, notes))
            })
            .collect()
    })?;

    let mut table = Vec::new();
    for row in rows {
        match row {
            Ok((row, notes)) => {
                table.push(row);
                outcome.notes.extend(notes);
            }
            Err(e) => outcome.notes.push(format!("skipped {e}")),
        }
    }
    let path = out.join("metrics.csv");
    write_csv(&path, &table)?;
    outcome.summary.push(format!(
        "{} metric rows ({} records skipped) -> {}",
        table.len(),
        resolved.len() - table.len(),
        path.display()
    ));
    outcome.outputs.push(path);
    let arguments = serde_json::json!({ "inputs": inputs, "references": references });
    finish(cfg, &out, "metrics", arguments, outcome)
}

/// Agent kinds accepted on the command line.
pub fn agent_kind(name: &str, alpha: f64, beta: f64) -> Option<AgentKind> {
    Some(match name {
        "bayesian" => AgentKind::Bayesian { alpha, beta },
        "map-only" => AgentKind::MapOnly { alpha, beta },
        "narrowest-compatible" => AgentKind::NarrowestCompatible,
        "uniform-noise" => AgentKind::UniformNoise,
        _ => return None,
    })
}
