use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::grid::RunResult;
use super::stats::Aggregate;
use crate::boat::Outcome;
use crate::metrics::{normalize_series, MetricsRecord};
use crate::wind::WindLabel;
use crate::Result;

pub const SUMMARY_HEADER: &str =
    "course,config,fou,mean_rmse,sd_rmse,mean_um,sd_um,mean_bd,sd_bd,mean_rp,sd_rp,completion_rate";

/// Per-cell aggregates over the repeats of one (course, config, FOU).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub course: u32,
    pub config: WindLabel,
    pub fou: u32,
    pub runs: usize,
    pub rmse: Aggregate,
    pub abs_perf: Aggregate,
    pub uncertainty: Aggregate,
    pub difficulty: Aggregate,
    pub rel_perf: Aggregate,
    pub mean_dir: Aggregate,
    pub sd_dir: Aggregate,
    pub mean_speed: Aggregate,
    pub sd_speed: Aggregate,
    pub completion_rate: f64,
}

impl SummaryRow {
    fn from_runs(course: u32, config: WindLabel, fou: u32, runs: &[&RunResult]) -> Self {
        let agg = |f: fn(&MetricsRecord) -> f64| {
            let v: Vec<f64> = runs.iter().map(|r| f(&r.metrics)).collect();
            Aggregate::of(&v).expect("cell has at least one run")
        };
        let completed = runs.iter().filter(|r| r.outcome == Outcome::Completed).count();
        Self {
            course,
            config,
            fou,
            runs: runs.len(),
            rmse: agg(|m| m.rmse),
            abs_perf: agg(|m| m.abs_perf),
            uncertainty: agg(|m| m.uncertainty_measure),
            difficulty: agg(|m| m.base_difficulty),
            rel_perf: agg(|m| m.rel_perf),
            mean_dir: agg(|m| m.mean_dir),
            sd_dir: agg(|m| m.sd_dir),
            mean_speed: agg(|m| m.mean_speed),
            sd_speed: agg(|m| m.sd_speed),
            completion_rate: completed as f64 / runs.len() as f64,
        }
    }

    fn csv_values(&self) -> [f64; 9] {
        [
            self.rmse.mean,
            self.rmse.sd,
            self.uncertainty.mean,
            self.uncertainty.sd,
            self.difficulty.mean,
            self.difficulty.sd,
            self.rel_perf.mean,
            self.rel_perf.sd,
            self.completion_rate,
        ]
    }
}

/// Groups runs by (course, config, FOU), sorted in that order.
pub fn aggregate_runs(runs: &[RunResult]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(u32, WindLabel, u32), Vec<&RunResult>> = BTreeMap::new();
    for r in runs {
        cells.entry((r.key.course, r.key.config, r.key.fou)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((course, config, fou), rs)| SummaryRow::from_runs(course, config, fou, &rs))
        .collect()
}

fn render_csv(rows: &[&SummaryRow], values: &[[f64; 9]]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for (row, vals) in rows.iter().zip(values) {
        write!(out, "{},{},{}", row.course, row.config, row.fou).unwrap();
        for v in vals {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Raw summary CSV for one table.
pub(crate) fn table_csv(rows: &[&SummaryRow]) -> String {
    let values: Vec<[f64; 9]> = rows.iter().map(|r| r.csv_values()).collect();
    render_csv(rows, &values)
}

/// Each mean column min-max scaled over the table; its σ column is divided
/// by the same range. Completion rate is left as is.
pub(crate) fn normalized_values(rows: &[&SummaryRow]) -> Result<Vec<[f64; 9]>> {
    let raw: Vec<[f64; 9]> = rows.iter().map(|r| r.csv_values()).collect();
    let mut out = raw.clone();
    for col in [0, 2, 4, 6] {
        let means: Vec<f64> = raw.iter().map(|v| v[col]).collect();
        let scaled = normalize_series(&means)?;
        let min = means.iter().copied().fold(f64::INFINITY, f64::min);
        let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = max - min;
        for (i, s) in scaled.into_iter().enumerate() {
            out[i][col] = s;
            out[i][col + 1] = if range > 0.0 { raw[i][col + 1] / range } else { 0.0 };
        }
    }
    Ok(out)
}

pub(crate) fn table_csv_normalized(rows: &[&SummaryRow]) -> Result<String> {
    Ok(render_csv(rows, &normalized_values(rows)?))
}

pub(crate) fn table_markdown(rows: &[&SummaryRow], normalized: bool) -> Result<String> {
    let values = if normalized {
        normalized_values(rows)?
    } else {
        rows.iter().map(|r| r.csv_values()).collect()
    };
    let (course, fou) = (rows[0].course, rows[0].fou);
    let mut out = String::new();
    writeln!(
        out,
        "Course {course} m, FOU size {fou}{}\n",
        if normalized { " (min-max normalized)" } else { "" }
    )
    .unwrap();
    writeln!(out, "| Wind Config. | Uncertainty Measure | Perf_Absolute | Base Difficulty | Perf_Relative | Completion |")
        .unwrap();
    writeln!(out, "|---|---:|---:|---:|---:|---:|").unwrap();
    for (row, v) in rows.iter().zip(&values) {
        writeln!(
            out,
            "| {} | {:.4} | {:.4} | {:.4} | {:.6} | {:.2} |",
            row.config, v[2], v[0], v[4], v[6], v[8]
        )
        .unwrap();
    }
    Ok(out)
}

/// Mean per-run wind standard deviations for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPoint {
    pub config: WindLabel,
    pub sigma_dir: f64,
    pub sigma_speed: f64,
    pub runs: usize,
}

/// Averages per-run (σ_dir, σ_speed) by configuration, in A..I order.
pub fn wind_sigma_series(items: impl IntoIterator<Item = (WindLabel, f64, f64)>) -> Vec<SigmaPoint> {
    let mut acc: BTreeMap<WindLabel, (f64, f64, usize)> = BTreeMap::new();
    for (label, sd_dir, sd_speed) in items {
        let e = acc.entry(label).or_insert((0.0, 0.0, 0));
        e.0 += sd_dir;
        e.1 += sd_speed;
        e.2 += 1;
    }
    acc.into_iter()
        .map(|(config, (d, s, n))| SigmaPoint {
            config,
            sigma_dir: d / n as f64,
            sigma_speed: s / n as f64,
            runs: n,
        })
        .collect()
}

pub(crate) fn sigma_csv(points: &[SigmaPoint]) -> String {
    let mut out = String::from("config,sigma_dir,sigma_speed,runs\n");
    for p in points {
        writeln!(out, "{},{},{},{}", p.config, p.sigma_dir, p.sigma_speed, p.runs).unwrap();
    }
    out
}
