//! JSON-lines readout caches.
//!
//! One record per (presentation, measurement, condition, thinking):
//!
//! ```json
//! {"task":"tenenbaum99","d":100,"stimulus_id":"16_8_2_64","n":4,"examples":[16,8,2,64],
//!  "measurement":"prediction","condition":"default","thinking":false,
//!  "payload":{"kind":"curve","provenance":"answer-probability","values":[...]}}
//! ```
//!
//! Payload kinds: `curve` (per-target yes probabilities), `counts` (yes and
//! valid reply counts per target) and `labels` (label text with raw confidence).

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use numgame_core::readout::{
    curve_from_counts, normalize_labels, Condition, LabelReadout, Measurement, PredictionReadout, Provenance,
};
use numgame_core::stimuli::Presentation;
use numgame_core::{candidate_list, HypothesisSpace, Task};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutRecord {
    pub task: Task,
    pub d: u32,
    pub stimulus_id: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub examples: Option<Vec<u32>>,
    pub measurement: Measurement,
    pub condition: Condition,
    pub thinking: bool,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Curve { provenance: Provenance, values: Vec<f64> },
    Counts { yes: Vec<u32>, valid: Vec<u32> },
    Labels { entries: Vec<LabelRecord> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub label: String,
    pub confidence: f64,
}

/// Identity of one readout cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub task: Task,
    pub d: u32,
    pub stimulus_id: String,
    pub n: usize,
    pub measurement: Measurement,
    pub condition: Condition,
    pub thinking: bool,
}

impl CellKey {
    /// The same cell at another domain size.
    pub fn with_d(&self, d: u32) -> CellKey {
        CellKey { d, ..self.clone() }
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/d{}/{}#n{}/{}/{}/{}",
            self.task.as_str(),
            self.d,
            self.stimulus_id,
            self.n,
            self.measurement,
            self.condition,
            if self.thinking { "thinking" } else { "no-thinking" }
        )
    }
}

/// Where a record came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Location {
    pub file: PathBuf,
    pub line: usize,
    /// Byte offset of the start of the line.
    pub offset: u64,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} (byte {})", self.file.display(), self.line, self.offset)
    }
}

#[derive(Debug, Clone)]
pub struct Located<T> {
    pub at: Location,
    pub value: T,
}

/// A line that could not be parsed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineError {
    #[serde(flatten)]
    pub at: Location,
    pub error: String,
}

#[derive(Debug, Default)]
pub struct ParsedFile {
    pub records: Vec<Located<ReadoutRecord>>,
    pub errors: Vec<LineError>,
}

impl ReadoutRecord {
    pub fn key(&self) -> CellKey {
        CellKey {
            task: self.task,
            d: self.d,
            stimulus_id: self.stimulus_id.clone(),
            n: self.n,
            measurement: self.measurement,
            condition: self.condition,
            thinking: self.thinking,
        }
    }

    /// Checks the record against its resolved presentation and returns the
    /// normalized readout.
    pub fn decode(&self, presentation: &Presentation, space: &HypothesisSpace) -> Result<Decoded, String> {
        if space.d() != self.d {
            return Err(format!("record has d={} but the space has d={}", self.d, space.d()));
        }
        if let Some(examples) = &self.examples {
            if *examples != presentation.examples {
                return Err(format!(
                    "examples {:?} disagree with stimulus prefix {:?}",
                    examples, presentation.examples
                ));
            }
        }
        match (&self.payload, self.measurement) {
            (Payload::Curve { provenance, values }, Measurement::Prediction) => {
                PredictionReadout::new(values.clone(), self.d, *provenance)
                    .map(Decoded::Prediction)
                    .map_err(|e| e.to_string())
            }
            (Payload::Counts { yes, valid }, Measurement::Prediction) => {
                if yes.len() != self.d as usize || valid.len() != self.d as usize {
                    return Err(format!("count vectors must have {} entries", self.d));
                }
                curve_from_counts(yes, valid)
                    .map(Decoded::Prediction)
                    .map_err(|e| e.to_string())
            }
            (Payload::Labels { entries }, m @ (Measurement::Evaluation | Measurement::Generation)) => {
                let raw: Vec<(String, f64)> = entries.iter().map(|e| (e.label.clone(), e.confidence)).collect();
                let candidates = match m {
                    Measurement::Evaluation => {
                        Some(candidate_list(space, &presentation.examples).map_err(|e| e.to_string())?)
                    }
                    _ => None,
                };
                normalize_labels(&raw, candidates.as_ref(), m, self.d)
                    .map(Decoded::Labels)
                    .map_err(|e| e.to_string())
            }
            (_, m) => Err(format!("payload kind does not fit a {m} readout")),
        }
    }
}

/// A record after validation and normalization.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoded {
    Prediction(PredictionReadout),
    Labels(LabelReadout),
}

/// Reads a JSON-lines file. Blank lines are skipped; malformed lines are
/// reported rather than aborting the read.
pub fn read_jsonl(path: &Path) -> Result<ParsedFile> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut parsed = ParsedFile::default();
    let mut line = String::new();
    let (mut line_no, mut offset) = (0usize, 0u64);
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(|e| Error::io(path, e))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        let at = Location {
            file: path.to_path_buf(),
            line: line_no,
            offset,
        };
        offset += read as u64;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ReadoutRecord>(&line) {
            Ok(value) => parsed.records.push(Located { at, value }),
            Err(e) => parsed.errors.push(LineError {
                at,
                error: e.to_string(),
            }),
        }
    }
    Ok(parsed)
}

pub fn write_jsonl<'a>(path: &Path, records: impl IntoIterator<Item = &'a ReadoutRecord>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(|e| Error::json(path, e))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
