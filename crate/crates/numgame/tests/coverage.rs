mod common;

use std::fs;
use std::path::Path;

use numgame::manifest::{validate_manifest, Manifest};
use numgame::readout_file::{read_jsonl, write_jsonl, Payload, ReadoutRecord};
use numgame_core::agent::{emit_prediction, AgentSpec};
use numgame_core::readout::{Condition, Measurement};
use numgame_core::stimuli::{expand_prefixes, tenenbaum99, ClassifierConfig, MAX_PREFIX};
use numgame_core::{build_space, Domain, Task};

fn reference_records(d: u32) -> Vec<ReadoutRecord> {
    let space = build_space(Task::Tenenbaum99, Domain::new(d).unwrap()).unwrap();
    let space100 = build_space(Task::Tenenbaum99, Domain::new(100).unwrap()).unwrap();
    let sets = tenenbaum99(&space100, &ClassifierConfig::default());
    expand_prefixes(&sets, MAX_PREFIX)
        .iter()
        .map(|p| {
            let r = emit_prediction(&AgentSpec::bayesian(1.0, 1.0), &space, p).unwrap().unwrap();
            ReadoutRecord {
                task: Task::Tenenbaum99,
                d,
                stimulus_id: p.stimulus_id.clone(),
                n: p.n,
                examples: Some(p.examples.clone()),
                measurement: Measurement::Prediction,
                condition: Condition::Default,
                thinking: false,
                payload: Payload::Curve {
                    provenance: r.provenance,
                    values: r.curve,
                },
            }
        })
        .collect()
}

fn manifest() -> Manifest {
    serde_json::from_str(r#"{"task": "tenenbaum99", "d": 100}"#).unwrap()
}

fn check(dir: &Path, files: &[Vec<ReadoutRecord>]) -> numgame::manifest::CoverageReport {
    let parsed: Vec<_> = files
        .iter()
        .enumerate()
        .map(|(i, records)| {
            let path = dir.join(format!("part{i}.jsonl"));
            write_jsonl(&path, records).unwrap();
            read_jsonl(&path).unwrap()
        })
        .collect();
    validate_manifest(&manifest(), &parsed, &ClassifierConfig::default()).unwrap()
}

#[test]
fn complete_run_covers_all_cells() {
    let dir = tempfile::tempdir().unwrap();
    let report = check(dir.path(), &[reference_records(100)]);
    assert_eq!((report.present, report.expected), (26, 26));
    assert!(report.ok, "{report:?}");
    assert!(report.missing.is_empty() && report.duplicates.is_empty() && report.invalid.is_empty());
}

#[test]
fn missing_prefix_is_listed() {
    let dir = tempfile::tempdir().unwrap();
    let mut records = reference_records(100);
    records.retain(|r| !(r.stimulus_id == "60_80_10_30" && r.n == 3));
    let report = check(dir.path(), &[records]);
    assert!(!report.ok);
    assert_eq!(report.missing_presentations, vec!["60_80_10_30#n3".to_string()]);
    assert_eq!(report.present, 25);
}

#[test]
fn duplicate_lists_both_offsets() {
    let dir = tempfile::tempdir().unwrap();
    let records = reference_records(100);
    let extra = vec![records[4].clone()];
    let report = check(dir.path(), &[records, extra]);
    assert!(!report.ok);
    assert_eq!(report.duplicates.len(), 1);
    let dup = &report.duplicates[0];
    assert_eq!(dup.locations.len(), 2);
    assert!(dup.locations[0].file.ends_with("part0.jsonl"));
    assert_eq!(dup.locations[0].line, 5);
    assert!(dup.locations[0].offset > 0);
    assert!(dup.locations[1].file.ends_with("part1.jsonl"));
    assert_eq!(dup.locations[1].offset, 0);
}

#[test]
fn domain_mismatch_and_invalid_payloads() {
    let dir = tempfile::tempdir().unwrap();
    let mut records = reference_records(100);
    records.pop();
    let wrong_d = reference_records(200).pop().unwrap();
    records.push(wrong_d);
    if let Payload::Curve { values, .. } = &mut records[0].payload {
        values[0] = -0.1;
    }
    let mut unknown = records[1].clone();
    unknown.stimulus_id = "1_2_3".into();
    records.push(unknown);
    let report = check(dir.path(), &[records]);
    assert!(!report.ok);
    assert_eq!(report.domain_mismatches.len(), 1);
    assert_eq!(report.domain_mismatches[0].found_d, 200);
    assert_eq!(report.missing.len(), 1);
    assert_eq!(report.invalid.len(), 1);
    assert_eq!(report.invalid[0].at.line, 1);
    assert_eq!(report.unexpected.len(), 1);
}

#[test]
fn manifest_crosses_measurements_and_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.json");
    let stimuli = common::write_bigelow16_fixture(dir.path());
    fs::write(
        &path,
        r#"{"task": "bigelow16", "d": 100, "measurements": ["prediction", "generation"],
            "conditions": ["default", "strong", "weak", "explicit"], "thinking": [false, true],
            "stimuli": "bigelow16_stimuli.json"}"#,
    )
    .unwrap();
    let m = Manifest::read(&path).unwrap();
    assert_eq!(m.stimuli.as_deref(), Some(stimuli.as_path()));
    let report = validate_manifest(&m, &[], &ClassifierConfig::default()).unwrap();
    assert_eq!(report.expected, 636 * 2 * 4 * 2);
    assert_eq!(report.present, 0);
}
