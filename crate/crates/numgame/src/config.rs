use std::fs;
use std::path::{Path, PathBuf};

use numgame_core::fit::FitConfig;
use numgame_core::metrics::DEFAULT_EPSILON;
use numgame_core::readout::Condition;
use numgame_core::stimuli::ClassifierConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "NUMGAME_OUT";
const FALLBACK_OUT: &str = "numgame-out";

/// Settings shared by every subcommand. Loaded from a JSON file, then
/// overridden by command-line flags; the resolved value is echoed into the
/// run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Output directory; falls back to `$NUMGAME_OUT`, then `./numgame-out`.
    pub out: Option<PathBuf>,
    /// Stimulus files for tasks whose sets are not embedded.
    pub stimuli: Vec<PathBuf>,
    /// Only these conditions are read; empty keeps all.
    pub conditions: Vec<Condition>,
    /// Fit scopes: `full`, `n1` .. `n4`.
    pub scopes: Vec<String>,
    /// Fit both sources jointly instead of one fit per task.
    pub pool_tasks: bool,
    /// KL floor on reference bins.
    pub epsilon: f64,
    pub classifier: ClassifierConfig,
    pub fit: FitConfig,
    /// Worker threads; `None` uses all cores.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            out: None,
            stimuli: Vec::new(),
            conditions: Vec::new(),
            scopes: ["full", "n1", "n2", "n3", "n4"].map(String::from).to_vec(),
            pool_tasks: false,
            epsilon: DEFAULT_EPSILON,
            classifier: ClassifierConfig::default(),
            fit: FitConfig::default(),
            workers: None,
        }
    }
}

impl RunConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(FALLBACK_OUT))
    }

    /// Creates the output directory and checks that the listed inputs exist.
    pub fn prepare<'a>(&self, inputs: impl IntoIterator<Item = &'a Path>) -> Result<PathBuf> {
        let inputs: Vec<&Path> = inputs.into_iter().collect();
        for path in inputs.into_iter().chain(self.stimuli.iter().map(PathBuf::as_path)) {
            if !path.is_file() {
                return Err(Error::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                ));
            }
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Usage("epsilon must be a non-negative number".into()));
        }
        let out = self.out_dir();
        fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
        Ok(out)
    }

    pub fn keeps(&self, condition: Condition) -> bool {
        self.conditions.is_empty() || self.conditions.contains(&condition)
    }

    /// Runs `f` on a pool sized by `workers`.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            builder = builder.num_threads(n.max(1));
        }
        let pool = builder
            .build()
            .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}
