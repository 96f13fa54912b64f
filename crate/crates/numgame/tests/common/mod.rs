#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};

use numgame::stimuli_file::{StimulusEntry, StimulusFile};
use numgame_core::Task;

/// Set-size profile of the Bigelow16 stimulus pool: 255 sets yielding 636
/// prefixes, 55 of them singletons.
pub const BIGELOW16_PROFILE: [(usize, usize); 4] = [(1, 55), (2, 100), (3, 19), (4, 81)];

/// Deterministic stand-in pool with the Bigelow16 size profile. The numbers
/// are arbitrary but valid: distinct values in 1..=100.
pub fn bigelow16_fixture() -> StimulusFile {
    let mut stimuli = Vec::new();
    let mut i = 0u32;
    for (size, count) in BIGELOW16_PROFILE {
        for _ in 0..count {
            // offsets 0, 29, 58, 87 are distinct mod 100
            let numbers: Vec<u32> = (0..size as u32).map(|j| (i * 7 + j * 29) % 100 + 1).collect();
            stimuli.push(StimulusEntry {
                id: format!("b{i:03}"),
                numbers,
            });
            i += 1;
        }
    }
    StimulusFile {
        source: Task::Bigelow16,
        stimuli,
    }
}

pub fn write_bigelow16_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("bigelow16_stimuli.json");
    bigelow16_fixture().write(&path).unwrap();
    path
}
