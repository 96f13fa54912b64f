//! Expected-cell manifests and coverage reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use numgame_core::readout::{Condition, Measurement};
use numgame_core::stimuli::ClassifierConfig;
use numgame_core::{build_space, Domain, Task};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::readout_file::{CellKey, LineError, Location, ParsedFile};
use crate::stimuli_file::{load_sets, Catalog};

/// Which cells a run is expected to contain: every presentation of `task`
/// crossed with the listed measurements, conditions and thinking settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub task: Task,
    pub d: u32,
    #[serde(default = "default_measurements")]
    pub measurements: Vec<Measurement>,
    #[serde(default = "default_conditions")]
    pub conditions: Vec<Condition>,
    #[serde(default = "default_thinking")]
    pub thinking: Vec<bool>,
    /// Stimulus file, relative to the manifest; required for Bigelow16.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stimuli: Option<PathBuf>,
}

fn default_measurements() -> Vec<Measurement> {
    vec![Measurement::Prediction]
}

fn default_conditions() -> Vec<Condition> {
    vec![Condition::Default]
}

fn default_thinking() -> Vec<bool> {
    vec![false]
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
        if let (Some(stimuli), Some(dir)) = (&manifest.stimuli, path.parent()) {
            if stimuli.is_relative() {
                manifest.stimuli = Some(dir.join(stimuli));
            }
        }
        Ok(manifest)
    }

    /// All expected cells, sorted.
    pub fn expected_cells(&self, catalog: &Catalog) -> BTreeSet<CellKey> {
        let mut cells = BTreeSet::new();
        for p in catalog.presentations(self.task) {
            for &measurement in &self.measurements {
                for &condition in &self.conditions {
                    for &thinking in &self.thinking {
                        cells.insert(CellKey {
                            task: self.task,
                            d: self.d,
                            stimulus_id: p.stimulus_id.clone(),
                            n: p.n,
                            measurement,
                            condition,
                            thinking,
                        });
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Duplicate {
    pub cell: String,
    pub locations: Vec<Location>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainMismatch {
    pub cell: String,
    #[serde(flatten)]
    pub at: Location,
    pub expected_d: u32,
    pub found_d: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Unexpected {
    pub cell: String,
    #[serde(flatten)]
    pub at: Location,
}

/// Machine-readable findings of a manifest check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub task: Task,
    pub d: u32,
    pub expected: usize,
    pub present: usize,
    /// No missing, duplicate, mismatched or invalid cells.
    pub ok: bool,
    pub missing: Vec<String>,
    /// Presentations (`stimulus#nK`) with at least one missing cell.
    pub missing_presentations: Vec<String>,
    pub duplicates: Vec<Duplicate>,
    pub domain_mismatches: Vec<DomainMismatch>,
    /// Cells outside the manifest; reported but not a failure.
    pub unexpected: Vec<Unexpected>,
    /// Unparseable lines and records whose payload fails validation.
    pub invalid: Vec<LineError>,
}

/// Checks parsed readout files against a manifest.
pub fn validate_manifest(
    manifest: &Manifest,
    files: &[ParsedFile],
    classifier: &ClassifierConfig,
) -> Result<CoverageReport> {
    let sets = load_sets(manifest.task, manifest.stimuli.as_deref(), classifier)?;
    let catalog = Catalog::new(&sets);
    let expected = manifest.expected_cells(&catalog);
    let space = build_space(manifest.task, Domain::new(manifest.d)?)?;

    let mut invalid: Vec<LineError> = files.iter().flat_map(|f| f.errors.iter().cloned()).collect();
    let records: Vec<_> = files.iter().flat_map(|f| f.records.iter()).collect();

    let decode_errors: Vec<LineError> = records
        .par_iter()
        .filter(|r| r.value.task == manifest.task && r.value.d == manifest.d)
        .filter_map(|r| {
            let p = catalog.get(r.value.task, &r.value.stimulus_id, r.value.n)?;
            r.value.decode(p, &space).err().map(|error| LineError {
                at: r.at.clone(),
                error,
            })
        })
        .collect();
    invalid.extend(decode_errors);
    invalid.sort_by(|a, b| a.at.cmp(&b.at));

    let mut seen: BTreeMap<CellKey, Vec<Location>> = BTreeMap::new();
    let mut domain_mismatches = Vec::new();
    let mut unexpected = Vec::new();
    for r in &records {
        let key = r.value.key();
        if key.task == manifest.task && key.d != manifest.d && expected.contains(&key.with_d(manifest.d)) {
            domain_mismatches.push(DomainMismatch {
                cell: key.to_string(),
                at: r.at.clone(),
                expected_d: manifest.d,
                found_d: key.d,
            });
        } else if expected.contains(&key) {
            seen.entry(key).or_default().push(r.at.clone());
        } else {
            unexpected.push(Unexpected {
                cell: key.to_string(),
                at: r.at.clone(),
            });
        }
    }
    domain_mismatches.sort_by(|a, b| a.at.cmp(&b.at));
    unexpected.sort_by(|a, b| a.at.cmp(&b.at));

    let duplicates: Vec<Duplicate> = seen
        .iter()
        .filter(|(_, locs)| locs.len() > 1)
        .map(|(key, locs)| {
            let mut locations = locs.clone();
            locations.sort();
            Duplicate {
                cell: key.to_string(),
                locations,
            }
        })
        .collect();
    let missing_keys: Vec<&CellKey> = expected.iter().filter(|k| !seen.contains_key(*k)).collect();
    let missing_presentations: BTreeSet<String> = missing_keys
        .iter()
        .map(|k| format!("{}#n{}", k.stimulus_id, k.n))
        .collect();

    let ok = missing_keys.is_empty() && duplicates.is_empty() && domain_mismatches.is_empty() && invalid.is_empty();
    Ok(CoverageReport {
        task: manifest.task,
        d: manifest.d,
        expected: expected.len(),
        present: seen.len(),
        ok,
        missing: missing_keys.iter().map(|k| k.to_string()).collect(),
        missing_presentations: missing_presentations.into_iter().collect(),
        duplicates,
        domain_mismatches,
        unexpected,
        invalid,
    })
}
