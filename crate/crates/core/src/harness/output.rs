use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentParams;
use super::grid::{stable_hash, GridResult, RunKey, RunResult};
use super::summary::{
    aggregate_runs, sigma_csv, table_csv, table_csv_normalized, table_markdown, wind_sigma_series, SigmaPoint,
    SummaryRow,
};
use crate::boat::RunLog;
use crate::metrics::compute_metrics;
use crate::wind::{WindConfig, WindLabel, WindLog};
use crate::{Error, Result};

/// Writes one table per (course, FOU) under `out_dir/summary/`:
/// `{course}_{fou}.csv`, `{course}_{fou}_normalized.csv` and
/// `{course}_{fou}.md` (raw or normalized per `normalized`).
/// Returns the raw CSV paths.
pub fn emit_summary(rows: &[SummaryRow], out_dir: &Path, normalized: bool) -> Result<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut tables: BTreeMap<(u32, u32), Vec<&SummaryRow>> = BTreeMap::new();
    for r in rows {
        tables.entry((r.course, r.fou)).or_default().push(r);
    }
    let dir = out_dir.join("summary");
    fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    for ((course, fou), mut table) in tables {
        table.sort_by_key(|r| r.config);
        let stem = format!("{course}_{fou}");
        let csv_path = dir.join(format!("{stem}.csv"));
        fs::write(&csv_path, table_csv(&table))?;
        fs::write(dir.join(format!("{stem}_normalized.csv")), table_csv_normalized(&table)?)?;
        fs::write(dir.join(format!("{stem}.md")), table_markdown(&table, normalized)?)?;
        written.push(csv_path);
    }
    Ok(written)
}

/// Writes `out_dir/wind/sigma_series.csv`.
pub fn emit_wind_figures(points: &[SigmaPoint], out_dir: &Path) -> Result<PathBuf> {
    if points.is_empty() {
        return Err(Error::EmptySeries);
    }
    let dir = out_dir.join("wind");
    fs::create_dir_all(&dir)?;
    let path = dir.join("sigma_series.csv");
    fs::write(&path, sigma_csv(points))?;
    Ok(path)
}

/// Writes `out_dir/logs/{course}_{config}_{fou}_{repeat}.csv`.
pub fn write_run_log(out_dir: &Path, key: &RunKey, log: &RunLog) -> Result<PathBuf> {
    let dir = out_dir.join("logs");
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{key}.csv"));
    log.write_csv(BufWriter::new(File::create(&path)?))?;
    Ok(path)
}

fn log_paths(out_dir: &Path) -> Result<Vec<(RunKey, PathBuf)>> {
    let dir = out_dir.join("logs");
    let mut found = Vec::new();
    for entry in fs::read_dir(&dir)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let Some(key) = path.file_stem().and_then(|s| s.to_str()).and_then(RunKey::parse) else {
            continue;
        };
        found.push((key, path));
    }
    found.sort();
    if found.is_empty() {
        return Err(Error::MalformedLog {
            path: dir.display().to_string(),
            reason: "no run logs named {course}_{config}_{fou}_{repeat}.csv".into(),
        });
    }
    Ok(found)
}

fn read_log(key: &RunKey, path: &Path, params: &ExperimentParams) -> Result<RunLog> {
    let course = params.sim.course(key.course)?;
    RunLog::read_csv(BufReader::new(File::open(path)?), &course, &params.sim).map_err(|e| match e {
        Error::MalformedLog { reason, .. } => Error::MalformedLog { path: path.display().to_string(), reason },
        other => other,
    })
}

/// Loads every stored run log, sorted by key.
pub fn load_logs(out_dir: &Path, params: &ExperimentParams) -> Result<Vec<(RunKey, RunLog)>> {
    log_paths(out_dir)?
        .into_iter()
        .map(|(key, path)| Ok((key, read_log(&key, &path, params)?)))
        .collect()
}

/// Recomputes metrics and summaries from the logs under `out_dir/logs/`.
pub fn report_from_logs(out_dir: &Path, params: &ExperimentParams) -> Result<GridResult> {
    let runs: Vec<RunResult> = log_paths(out_dir)?
        .into_par_iter()
        .map(|(key, path)| {
            let log = read_log(&key, &path, params)?;
            Ok(RunResult {
                key,
                seed: None,
                metrics: compute_metrics(&log, &params.metrics)?,
                outcome: log.outcome,
                steps: log.len(),
            })
        })
        .collect::<Result<_>>()?;
    let summary = aggregate_runs(&runs);
    Ok(GridResult { runs, summary })
}

/// Wind statistics alone: `repeats` logs of `duration` seconds per label.
pub fn run_windcheck(
    labels: &[WindLabel],
    repeats: u32,
    base_seed: u64,
    duration: f64,
    params: &ExperimentParams,
) -> Result<Vec<SigmaPoint>> {
    if labels.is_empty() || repeats == 0 {
        return Err(Error::InvalidGrid("windcheck needs at least one label and one repeat".into()));
    }
    let jobs: Vec<(WindLabel, u32)> =
        labels.iter().flat_map(|&l| (0..repeats).map(move |r| (l, r))).collect();
    let stats: Vec<(WindLabel, f64, f64)> = jobs
        .into_par_iter()
        .map(|(label, r)| {
            let seed = base_seed ^ stable_hash(&[label.index() as u64, r as u64]);
            let log = WindLog::generate(seed, WindConfig::from_label(label), params.wind, duration, params.sim.dt)?;
            let s = log.stats()?;
            Ok((label, s.sd_dir, s.sd_speed))
        })
        .collect::<Result<_>>()?;
    Ok(wind_sigma_series(stats))
}
