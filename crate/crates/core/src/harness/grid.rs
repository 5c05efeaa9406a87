use std::fmt;

use rayon::prelude::*;

use super::config::ExperimentParams;
use super::summary::{aggregate_runs, SummaryRow};
use crate::boat::{run_simulation, Outcome, RunLog, COURSE_OFFSETS};
use crate::fuzzy::{RuleBase, FOU_SIZES};
use crate::metrics::{compute_metrics, MetricsRecord};
use crate::wind::{WindConfig, WindLabel};
use crate::{Error, Result};

/// The sweep: every course × wind configuration × FOU size, `repeats` times.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub courses: Vec<u32>,
    pub configs: Vec<WindLabel>,
    pub fou_sizes: Vec<u32>,
    pub repeats: u32,
    pub base_seed: u64,
    /// Same repeat index ⇒ same wind seed across FOU sizes.
    pub paired: bool,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        Self {
            courses: COURSE_OFFSETS.to_vec(),
            configs: WindLabel::ALL.to_vec(),
            fou_sizes: FOU_SIZES.to_vec(),
            repeats: 30,
            base_seed: 0,
            paired: true,
        }
    }
}

/// Identifies one run within a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunKey {
    pub course: u32,
    pub config: WindLabel,
    pub fou: u32,
    pub repeat: u32,
}

impl fmt::Display for RunKey {
    /// `{course}_{config}_{fou}_{repeat}`, the log file stem.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}_{}", self.course, self.config, self.fou, self.repeat)
    }
}

impl RunKey {
    /// Parses a log file stem.
    pub fn parse(stem: &str) -> Option<Self> {
        let mut parts = stem.split('_');
        let key = RunKey {
            course: parts.next()?.parse().ok()?,
            config: parts.next()?.parse().ok()?,
            fou: parts.next()?.parse().ok()?,
            repeat: parts.next()?.parse().ok()?,
        };
        parts.next().is_none().then_some(key)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash that is stable across platforms, builds and releases.
pub fn stable_hash(parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(parts.len() as u64), |h, &p| splitmix64(h ^ p))
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGrid(msg));
        if self.courses.is_empty() || self.configs.is_empty() || self.fou_sizes.is_empty() {
            return bad("courses, configs and FOU sizes must be nonempty".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if let Some(c) = self.courses.iter().find(|c| !COURSE_OFFSETS.contains(c)) {
            return Err(Error::InvalidOffset(*c));
        }
        if let Some(f) = self.fou_sizes.iter().find(|f| !FOU_SIZES.contains(f)) {
            return bad(format!("FOU size {f} is not one of {FOU_SIZES:?}"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.courses.len() * self.configs.len() * self.fou_sizes.len() * self.repeats as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All runs in course, config, FOU, repeat order.
    pub fn keys(&self) -> Vec<RunKey> {
        let mut out = Vec::with_capacity(self.len());
        for &course in &self.courses {
            for &config in &self.configs {
                for &fou in &self.fou_sizes {
                    for repeat in 0..self.repeats {
                        out.push(RunKey { course, config, fou, repeat });
                    }
                }
            }
        }
        out
    }

    /// Wind seed of a run; depends only on the run's own coordinates, so a
    /// cell reproduces in isolation and execution order is irrelevant.
    pub fn seed_for(&self, key: &RunKey) -> u64 {
        let (c, k, r) = (key.course as u64, key.config.index() as u64, key.repeat as u64);
        let h = if self.paired {
            stable_hash(&[c, k, r])
        } else {
            stable_hash(&[c, k, key.fou as u64, r])
        };
        self.base_seed ^ h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub key: RunKey,
    /// Unknown when the result was rebuilt from a stored log.
    pub seed: Option<u64>,
    pub metrics: MetricsRecord,
    pub outcome: Outcome,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub runs: Vec<RunResult>,
    pub summary: Vec<SummaryRow>,
}

/// Runs one grid cell repeat and returns its log.
pub fn run_single(key: &RunKey, seed: u64, params: &ExperimentParams) -> Result<RunLog> {
    let rb = params.controller.build(key.fou as f64)?;
    run_with(&rb, key, seed, params)
}

fn run_with(rb: &RuleBase, key: &RunKey, seed: u64, params: &ExperimentParams) -> Result<RunLog> {
    let course = params.sim.course(key.course)?;
    let cfg = WindConfig::from_label(key.config);
    run_simulation(rb, &course, &cfg, &params.wind, &params.sim, seed)
}

/// Executes every run of the grid in parallel on the current rayon pool.
///
/// `sink` sees each log once, from the worker that produced it; logs are
/// dropped afterwards so memory stays bounded by the pool size.
pub fn run_grid<F>(grid: &ExperimentGrid, params: &ExperimentParams, sink: F) -> Result<GridResult>
where
    F: Fn(&RunKey, &RunLog) -> Result<()> + Sync,
{
    grid.validate()?;
    params.sim.validate()?;
    let rule_bases: Vec<(u32, RuleBase)> = grid
        .fou_sizes
        .iter()
        .map(|&f| Ok((f, params.controller.build(f as f64)?)))
        .collect::<Result<_>>()?;

    let runs: Vec<RunResult> = grid
        .keys()
        .into_par_iter()
        .map(|key| {
            let rb = &rule_bases.iter().find(|(f, _)| *f == key.fou).expect("rule base built per FOU").1;
            let seed = grid.seed_for(&key);
            let log = run_with(rb, &key, seed, params)?;
            sink(&key, &log)?;
            Ok(RunResult {
                key,
                seed: Some(seed),
                metrics: compute_metrics(&log, &params.metrics)?,
                outcome: log.outcome,
                steps: log.len(),
            })
        })
        .collect::<Result<_>>()?;

    let summary = aggregate_runs(&runs);
    Ok(GridResult { runs, summary })
}
