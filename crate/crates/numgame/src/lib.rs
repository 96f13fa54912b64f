//! File formats, readout ingestion and the command-line runner built on
//! [`numgame_core`].
//!
//! - [`space_file`]: hypothesis-space JSON export/import.
//! - [`stimuli_file`]: stimulus-set files and presentation lookup.
//! - [`readout_file`]: the JSON-lines readout cache format.
//! - [`manifest`]: expected-cell manifests and coverage reports.
//! - [`commands`]: the `numgame` subcommands as library functions.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod readout_file;
pub mod space_file;
pub mod stimuli_file;
pub mod tables;

pub use config::RunConfig;
pub use error::{Error, Result};
