//! Performance metrics for one run.
//!
//! Absolute performance is the RMSE of the wrapped bearing error. The
//! uncertainty measure is the product of the wind direction and speed
//! standard deviations, base difficulty is the product of a direction value
//! and a speed value computed from the mean wind, and relative performance
//! divides the absolute performance by both. Lower is better throughout.

use serde::{Deserialize, Serialize};

use crate::boat::RunLog;
use crate::wind::{wind_stats, WindSample, WindStats};
use crate::{wrap_180, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricParams {
    /// Lower bound applied to base difficulty. Zero disables the floor.
    pub difficulty_floor: f64,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self { difficulty_floor: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub rmse: f64,
    pub abs_perf: f64,
    pub uncertainty_measure: f64,
    pub base_difficulty: f64,
    pub rel_perf: f64,
    pub mean_dir: f64,
    pub sd_dir: f64,
    pub mean_speed: f64,
    pub sd_speed: f64,
}

/// Root mean square of a bearing-error series.
pub fn rmse_of(errors: impl Iterator<Item = f64>) -> Result<f64> {
    let (n, sum_sq) = errors.fold((0usize, 0.0), |(n, s), e| (n + 1, s + e * e));
    if n == 0 {
        return Err(Error::EmptyLog);
    }
    Ok((sum_sq / n as f64).sqrt())
}

pub fn rmse(log: &RunLog) -> Result<f64> {
    rmse_of(log.errors())
}

/// With a single input the combining function is the identity.
pub fn absolute_performance(log: &RunLog) -> Result<f64> {
    rmse(log)
}

pub fn uncertainty_from_stats(stats: &WindStats) -> f64 {
    stats.sd_dir * stats.sd_speed
}

pub fn uncertainty_measure(log: &RunLog) -> Result<f64> {
    let samples: Vec<WindSample> = log.wind_samples().collect();
    Ok(uncertainty_from_stats(&wind_stats(&samples)?))
}

/// 0 for calm, 1 above 14 m/s, 0.5 otherwise.
pub fn wind_speed_value(mean_speed: f64) -> f64 {
    if mean_speed == 0.0 {
        0.0
    } else if mean_speed > 14.0 {
        1.0
    } else {
        0.5
    }
}

/// 1 for a headwind along the course, 0 for a tailwind, smooth between.
pub fn wind_direction_value(mean_dir: f64, course_bearing: f64) -> f64 {
    let delta = wrap_180(mean_dir - course_bearing).to_radians();
    0.5 * (1.0 + delta.cos())
}

pub fn base_difficulty(mean_dir: f64, mean_speed: f64, course_bearing: f64, params: &MetricParams) -> f64 {
    let raw = wind_direction_value(mean_dir, course_bearing) * wind_speed_value(mean_speed);
    raw.max(params.difficulty_floor)
}

pub fn relative_performance(abs_perf: f64, uncertainty: f64, difficulty: f64) -> Result<f64> {
    let denom = uncertainty * difficulty;
    if !(denom > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(abs_perf / denom)
}

pub fn compute_metrics(log: &RunLog, params: &MetricParams) -> Result<MetricsRecord> {
    let rmse = rmse(log)?;
    let samples: Vec<WindSample> = log.wind_samples().collect();
    let stats = wind_stats(&samples)?;
    let um = uncertainty_from_stats(&stats);
    let bd = base_difficulty(stats.mean_dir, stats.mean_speed, log.course_bearing, params);
    Ok(MetricsRecord {
        rmse,
        abs_perf: rmse,
        uncertainty_measure: um,
        base_difficulty: bd,
        rel_perf: relative_performance(rmse, um, bd)?,
        mean_dir: stats.mean_dir,
        sd_dir: stats.sd_dir,
        mean_speed: stats.mean_speed,
        sd_speed: stats.sd_speed,
    })
}

/// Min-max scaling to `[0, 1]`; a constant series maps to zeros.
pub fn normalize_series(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    Ok(values
        .iter()
        .map(|&v| if range > 0.0 { (v - min) / range } else { 0.0 })
        .collect())
}
