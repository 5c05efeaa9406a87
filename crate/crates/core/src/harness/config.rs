use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::boat::SimParams;
use crate::fuzzy::ControllerConfig;
use crate::metrics::MetricParams;
use crate::wind::{WindLabel, WindParams};
use crate::Result;

/// Model parameters shared by every run of an experiment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentParams {
    pub sim: SimParams,
    pub wind: WindParams,
    pub controller: ControllerConfig,
    pub metrics: MetricParams,
}

/// TOML config file. Top-level keys mirror the command-line flags; the
/// `[sim]`, `[wind]`, `[controller]` and `[metrics]` tables override model
/// parameters. Anything left out keeps its default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub course: Option<Vec<u32>>,
    pub config: Option<Vec<WindLabel>>,
    pub fou: Option<Vec<u32>>,
    pub repeats: Option<u32>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub normalized: Option<bool>,
    /// Share wind seeds across FOU sizes for the same repeat index.
    pub paired: Option<bool>,
    /// Worker threads; 0 or absent uses all cores.
    pub workers: Option<usize>,
    /// Write one CSV per run under `logs/`.
    pub write_logs: Option<bool>,
    pub sim: SimParams,
    pub wind: WindParams,
    pub controller: ControllerConfig,
    pub metrics: MetricParams,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn params(&self) -> ExperimentParams {
        ExperimentParams {
            sim: self.sim.clone(),
            wind: self.wind,
            controller: self.controller.clone(),
            metrics: self.metrics,
        }
    }
}
