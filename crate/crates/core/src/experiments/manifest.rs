use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::Result;

/// Everything needed to rerun an experiment, written next to its outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    /// Resolved configuration, in the order it should be printed.
    pub config: Vec<(String, String)>,
    pub seed: u64,
    pub version: String,
    pub outputs: Vec<PathBuf>,
    pub wall_time: Duration,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            config: Vec::new(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command = {}", self.command).unwrap();
        writeln!(s, "version = {}", self.version).unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        for (k, v) in &self.config {
            writeln!(s, "{k} = {v}").unwrap();
        }
        for p in &self.outputs {
            writeln!(s, "output = {}", p.display()).unwrap();
        }
        writeln!(s, "wall_time_secs = {:.3}", self.wall_time.as_secs_f64()).unwrap();
        s
    }

    /// Path of the manifest belonging to `output`: same stem, `.manifest`.
    pub fn path_for(output: &Path) -> PathBuf {
        output.with_extension("manifest")
    }

    /// Writes the manifest beside `output` and returns its path.
    pub fn write_beside(&self, output: &Path) -> Result<PathBuf> {
        let path = Self::path_for(output);
        fs::write(&path, self.to_text())?;
        Ok(path)
    }
}
