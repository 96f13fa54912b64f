//! Stimulus files and presentation lookup.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use numgame_core::stimuli::{self, ClassifierConfig, Presentation, StimulusSet, MAX_PREFIX};
use numgame_core::{build_space, Domain, Task};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `{"source": "bigelow16", "stimuli": [{"id": "...", "numbers": [..]}, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StimulusFile {
    pub source: Task,
    pub stimuli: Vec<StimulusEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StimulusEntry {
    pub id: String,
    pub numbers: Vec<u32>,
}

impl StimulusFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self).map_err(|e| Error::json(path, e))?;
        fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    /// Validates and classifies every set against the task's `d = 100` space.
    pub fn into_sets(self, config: &ClassifierConfig) -> Result<Vec<StimulusSet>> {
        let space = build_space(self.source, Domain::new(stimuli::STIMULUS_DOMAIN)?)?;
        let mut seen = std::collections::BTreeSet::new();
        self.stimuli
            .into_iter()
            .map(|entry| {
                if !seen.insert(entry.id.clone()) {
                    return Err(Error::Validation(format!("duplicate stimulus id {:?}", entry.id)));
                }
                StimulusSet::new(entry.id.clone(), self.source, entry.numbers, &space, config)
                    .map_err(|e| Error::Validation(format!("stimulus {:?}: {e}", entry.id)))
            })
            .collect()
    }
}

/// Stimulus sets for `task`: embedded for Tenenbaum99, from `file` otherwise.
pub fn load_sets(task: Task, file: Option<&Path>, config: &ClassifierConfig) -> Result<Vec<StimulusSet>> {
    match (task, file) {
        (_, Some(path)) => {
            let parsed = StimulusFile::read(path)?;
            if parsed.source != task {
                return Err(Error::Usage(format!(
                    "{} holds {} stimuli, expected {}",
                    path.display(),
                    parsed.source.as_str(),
                    task.as_str()
                )));
            }
            parsed.into_sets(config)
        }
        (Task::Tenenbaum99, None) => {
            let space = build_space(Task::Tenenbaum99, Domain::new(stimuli::STIMULUS_DOMAIN)?)?;
            Ok(stimuli::tenenbaum99(&space, config))
        }
        (Task::Bigelow16, None) => Err(Error::Usage(
            "bigelow16 stimuli are not embedded; pass a stimulus file".into(),
        )),
    }
}

/// Presentations keyed by `(source, stimulus id, n)`.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    by_key: BTreeMap<(Task, String, usize), Presentation>,
}

impl Catalog {
    pub fn new(sets: &[StimulusSet]) -> Self {
        let by_key = stimuli::expand_prefixes(sets, MAX_PREFIX)
            .into_iter()
            .map(|p| ((p.source, p.stimulus_id.clone(), p.n), p))
            .collect();
        Catalog { by_key }
    }

    pub fn extend(&mut self, sets: &[StimulusSet]) {
        self.by_key.extend(Catalog::new(sets).by_key);
    }

    pub fn get(&self, task: Task, stimulus_id: &str, n: usize) -> Option<&Presentation> {
        self.by_key.get(&(task, stimulus_id.to_string(), n))
    }

    pub fn presentations(&self, task: Task) -> impl Iterator<Item = &Presentation> {
        self.by_key.values().filter(move |p| p.source == task)
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }
}
