//! Run configuration: command-line flags override an optional TOML file,
//! which overrides the built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use dephasing_core::{OptimizerConfig, DEFAULT_VOLUME_TOL};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_FIGURE2_COUNT: usize = 2000;
pub const DEFAULT_FIGURE3_COUNT: usize = 500;
pub const DEFAULT_GRID_POINTS: usize = 41;

/// Keys accepted in a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub k: Option<usize>,
    pub max_iters: Option<usize>,
    pub threads: Option<usize>,
    pub vol_tol: Option<f64>,
    pub count: Option<usize>,
    pub count2: Option<usize>,
    pub count3: Option<usize>,
    pub count4: Option<usize>,
    pub points: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankCount {
    pub rank: usize,
    pub count: usize,
}

/// Fully resolved settings of one invocation; this is what `--manifest`
/// writes out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<RankCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    pub seed: u64,
    pub restarts: usize,
    pub tol: f64,
    /// Decomposition length; `None` picks it from the rank.
    pub k: Option<usize>,
    pub max_iters: usize,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    pub vol_tol: f64,
    pub strict: bool,
}

impl RunConfig {
    /// Defaults for `command` with the shared settings taken from `file`.
    pub fn new(command: &str, file: &FileConfig) -> Self {
        let opt = OptimizerConfig::default();
        RunConfig {
            command: command.into(),
            input: None,
            output: None,
            curve_output: None,
            counts: Vec::new(),
            points: None,
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            restarts: file.restarts.unwrap_or(opt.restarts),
            tol: file.tol.unwrap_or(opt.objective_tol),
            k: file.k.or(opt.decomposition_len),
            max_iters: file.max_iters.unwrap_or(opt.max_iters),
            threads: file.threads.unwrap_or(0),
            vol_tol: file.vol_tol.unwrap_or(DEFAULT_VOLUME_TOL),
            strict: false,
        }
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            decomposition_len: self.k,
            max_iters: self.max_iters,
            objective_tol: self.tol,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(c) = self.counts.iter().find(|c| c.count == 0) {
            return Err(CliError::Config(format!(
                "rank-{} count must be at least 1",
                c.rank
            )));
        }
        if matches!(self.points, Some(p) if p < 2) {
            return Err(CliError::Config("grids need at least 2 points".into()));
        }
        if self.vol_tol.is_nan() || self.vol_tol <= 0.0 {
            return Err(CliError::Config("volume tolerance must be positive".into()));
        }
        if self.k == Some(0) {
            return Err(CliError::Config("k must be at least 1".into()));
        }
        self.optimizer()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn manifest_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
