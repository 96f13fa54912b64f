//! CSV output tables.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    /// Pooled sources joined by `+`.
    pub tasks: String,
    pub d: u32,
    pub condition: String,
    pub thinking: bool,
    pub scope: String,
    pub alpha: f64,
    pub beta: f64,
    pub log_alpha_over_beta: f64,
    pub loss: f64,
    pub n_presentations: usize,
    pub converged: bool,
}

/// One row per readout cell. Empty cells mean "not applicable" (e.g. top-1
/// fields of a prediction curve, extension fields below `d = 200`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub task: String,
    pub d: u32,
    pub stimulus_id: String,
    pub n: usize,
    pub category: String,
    pub measurement: String,
    pub condition: String,
    pub thinking: bool,
    pub jsd: Option<f64>,
    pub kl: Option<f64>,
    pub entropy: Option<f64>,
    pub m_ext: Option<f64>,
    pub shape_kl: Option<f64>,
    pub rule_label: Option<String>,
    pub rule_mean: Option<f64>,
    pub nonrule_mean: Option<f64>,
    pub top1_label: Option<String>,
    pub top1_weight: Option<f64>,
    pub top1_support_fraction: Option<f64>,
    pub top1_example_consistent: Option<bool>,
    pub top1_is_rule: Option<bool>,
    pub matched_mass: Option<f64>,
    pub unmatched_mass: Option<f64>,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
