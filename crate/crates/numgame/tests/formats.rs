mod common;

use std::fs;

use numgame::readout_file::{read_jsonl, write_jsonl, Decoded, LabelRecord, Payload, ReadoutRecord};
use numgame::space_file::SpaceFile;
use numgame::stimuli_file::{load_sets, Catalog, StimulusFile};
use numgame_core::readout::{Condition, Measurement, Provenance};
use numgame_core::stimuli::ClassifierConfig;
use numgame_core::{build_space, candidate_list, Domain, Task};

fn record(stimulus_id: &str, n: usize, payload: Payload, measurement: Measurement) -> ReadoutRecord {
    ReadoutRecord {
        task: Task::Tenenbaum99,
        d: 100,
        stimulus_id: stimulus_id.into(),
        n,
        examples: None,
        measurement,
        condition: Condition::Default,
        thinking: false,
        payload,
    }
}

#[test]
fn space_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    for (task, d) in [(Task::Tenenbaum99, 100), (Task::Tenenbaum99, 200), (Task::Bigelow16, 100)] {
        let space = build_space(task, Domain::new(d).unwrap()).unwrap();
        let path = dir.path().join("space.json");
        SpaceFile::from_space(&space).write(&path).unwrap();
        let back = SpaceFile::read(&path).unwrap().into_space().unwrap();
        assert_eq!(back, space);
        for (a, b) in back.prior().iter().zip(space.prior()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn corrupted_space_is_rejected() {
    let space = build_space(Task::Tenenbaum99, Domain::new(100).unwrap()).unwrap();
    let mut file = SpaceFile::from_space(&space);
    file.hypotheses[0].support_runs = vec![[90, 120]];
    assert!(file.clone().into_space().is_err());
    let mut file = SpaceFile::from_space(&space);
    file.hypotheses[1].support_runs = file.hypotheses[0].support_runs.clone();
    assert!(file.into_space().is_err());
}

#[test]
fn stimulus_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = common::write_bigelow16_fixture(dir.path());
    let cfg = ClassifierConfig::default();
    let sets = load_sets(Task::Bigelow16, Some(&path), &cfg).unwrap();
    assert_eq!(sets.len(), 255);
    assert_eq!(Catalog::new(&sets).len(), 636);
    assert!(load_sets(Task::Bigelow16, None, &cfg).is_err());
    assert!(load_sets(Task::Tenenbaum99, Some(&path), &cfg).is_err());

    let bad = StimulusFile {
        source: Task::Bigelow16,
        stimuli: vec![numgame::stimuli_file::StimulusEntry {
            id: "x".into(),
            numbers: vec![5, 5],
        }],
    };
    assert!(bad.into_sets(&cfg).is_err());
}

#[test]
fn jsonl_records_round_trip_with_offsets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let curve = Payload::Curve {
        provenance: Provenance::AnswerProbability,
        values: vec![0.25; 100],
    };
    let records = vec![
        record("16", 1, curve.clone(), Measurement::Prediction),
        record("60", 1, curve, Measurement::Prediction),
    ];
    write_jsonl(&path, &records).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let first_len = text.lines().next().unwrap().len() as u64 + 1;

    let parsed = read_jsonl(&path).unwrap();
    assert!(parsed.errors.is_empty());
    let values: Vec<_> = parsed.records.iter().map(|r| r.value.clone()).collect();
    assert_eq!(values, records);
    assert_eq!(parsed.records[0].at.offset, 0);
    assert_eq!(parsed.records[1].at.offset, first_len);
    assert_eq!(parsed.records[1].at.line, 2);
}

#[test]
fn malformed_lines_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let good = serde_json::to_string(&record(
        "16",
        1,
        Payload::Counts {
            yes: vec![1; 100],
            valid: vec![2; 100],
        },
        Measurement::Prediction,
    ))
    .unwrap();
    fs::write(&path, format!("{good}\n\n{{\"task\": \"tenenbaum99\"}}\nnot json\n")).unwrap();
    let parsed = read_jsonl(&path).unwrap();
    assert_eq!(parsed.records.len(), 1);
    let lines: Vec<usize> = parsed.errors.iter().map(|e| e.at.line).collect();
    assert_eq!(lines, vec![3, 4]);
}

#[test]
fn decoding_checks_payloads() {
    let space = build_space(Task::Tenenbaum99, Domain::new(100).unwrap()).unwrap();
    let catalog = Catalog::new(&load_sets(Task::Tenenbaum99, None, &ClassifierConfig::default()).unwrap());
    let p = catalog.get(Task::Tenenbaum99, "16_8_2_64", 2).unwrap();

    let mut values = vec![0.5; 100];
    values[10] = 1.5;
    let out_of_range = record(
        "16_8_2_64",
        2,
        Payload::Curve {
            provenance: Provenance::AnswerProbability,
            values,
        },
        Measurement::Prediction,
    );
    assert!(out_of_range.decode(p, &space).unwrap_err().contains("index 10"));

    let counts = record(
        "16_8_2_64",
        2,
        Payload::Counts {
            yes: vec![7; 100],
            valid: vec![20; 100],
        },
        Measurement::Prediction,
    );
    match counts.decode(p, &space).unwrap() {
        Decoded::Prediction(r) => {
            assert_eq!(r.curve[0], 0.35);
            assert_eq!(r.provenance, Provenance::TextResponse);
        }
        other => panic!("{other:?}"),
    }

    let mut wrong_examples = counts.clone();
    wrong_examples.examples = Some(vec![16, 9]);
    assert!(wrong_examples.decode(p, &space).is_err());

    let labels = |entries: &[(&str, f64)], m| {
        record(
            "16_8_2_64",
            2,
            Payload::Labels {
                entries: entries
                    .iter()
                    .map(|(l, c)| LabelRecord {
                        label: l.to_string(),
                        confidence: *c,
                    })
                    .collect(),
            },
            m,
        )
    };
    let generation = labels(&[("powers of two", 0.3), ("powers of 2", 0.6), ("gut feeling", 0.9)], Measurement::Generation);
    match generation.decode(p, &space).unwrap() {
        Decoded::Labels(l) => {
            assert_eq!(l.entries.len(), 2);
            assert!((l.matched_mass - 0.4).abs() < 1e-15);
            assert!((l.unmatched_mass - 0.6).abs() < 1e-15);
        }
        other => panic!("{other:?}"),
    }

    let k = candidate_list(&space, &p.examples).unwrap();
    let shown: Vec<(&str, f64)> = k.displayed().iter().map(|c| (c.label.as_str(), 1.0)).collect();
    assert!(labels(&shown, Measurement::Evaluation).decode(p, &space).is_ok());
    assert!(labels(&[("primes", 1.0), ("made up", 1.0)], Measurement::Evaluation)
        .decode(p, &space)
        .is_err());
    assert!(labels(&[("primes", 1.0)], Measurement::Prediction).decode(p, &space).is_err());
}
