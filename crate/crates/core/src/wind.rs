//! Bounded stochastic wind process.
//!
//! Every `change_interval` seconds a new target direction and speed is drawn
//! from a normal distribution centred on the configured limits (σ = range/4)
//! and clamped to them. Between target changes each sample is the held
//! target plus small Gaussian jitter.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{wrap_360, Error, Result};

/// Variability level of one wind channel, with its uncertainty score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    None = 0,
    Low = 1,
    High = 2,
}

impl Level {
    pub fn score(self) -> u8 {
        self as u8
    }

    /// Direction limits in degrees (wind-from, 0 = north).
    pub fn direction_limits(self) -> (f64, f64) {
        match self {
            Level::None => (180.0, 180.0),
            Level::Low => (160.0, 200.0),
            Level::High => (140.0, 220.0),
        }
    }

    /// Speed limits in m/s.
    pub fn speed_limits(self) -> (f64, f64) {
        match self {
            Level::None => (7.0, 7.0),
            Level::Low => (4.0, 10.0),
            Level::High => (1.0, 13.0),
        }
    }
}

/// One of the nine wind configurations `A`..`I`: rows vary direction,
/// columns vary speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum WindLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
}

impl WindLabel {
    pub const ALL: [WindLabel; 9] = [
        WindLabel::A,
        WindLabel::B,
        WindLabel::C,
        WindLabel::D,
        WindLabel::E,
        WindLabel::F,
        WindLabel::G,
        WindLabel::H,
        WindLabel::I,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// (direction level, speed level)
    pub fn levels(self) -> (Level, Level) {
        const LEVELS: [Level; 3] = [Level::None, Level::Low, Level::High];
        let i = self.index();
        (LEVELS[i % 3], LEVELS[i / 3])
    }

    pub fn total_score(self) -> u8 {
        let (d, s) = self.levels();
        d.score() + s.score()
    }

    pub fn letter(self) -> char {
        (b'A' + self.index() as u8) as char
    }
}

impl fmt::Display for WindLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for WindLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let mut chars = t.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                let c = c.to_ascii_uppercase();
                WindLabel::ALL
                    .into_iter()
                    .find(|l| l.letter() == c)
                    .ok_or_else(|| Error::UnknownLabel(s.to_string()))
            }
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl TryFrom<String> for WindLabel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<WindLabel> for String {
    fn from(l: WindLabel) -> String {
        l.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindConfig {
    pub label: WindLabel,
    pub dir_lower: f64,
    pub dir_upper: f64,
    pub speed_lower: f64,
    pub speed_upper: f64,
    pub dir_score: u8,
    pub speed_score: u8,
}

impl WindConfig {
    pub fn from_label(label: WindLabel) -> Self {
        let (d, s) = label.levels();
        let (dir_lower, dir_upper) = d.direction_limits();
        let (speed_lower, speed_upper) = s.speed_limits();
        Self {
            label,
            dir_lower,
            dir_upper,
            speed_lower,
            speed_upper,
            dir_score: d.score(),
            speed_score: s.score(),
        }
    }

    pub fn parse(label: &str) -> Result<Self> {
        Ok(Self::from_label(label.parse()?))
    }

    pub fn mean_direction(&self) -> f64 {
        0.5 * (self.dir_lower + self.dir_upper)
    }

    pub fn mean_speed(&self) -> f64 {
        0.5 * (self.speed_lower + self.speed_upper)
    }
}

/// Cadence and jitter of the wind process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindParams {
    /// Seconds between target draws.
    pub change_interval: f64,
    /// Per-step jitter σ on direction (degrees).
    pub dir_jitter: f64,
    /// Per-step jitter σ on speed (m/s).
    pub speed_jitter: f64,
}

impl Default for WindParams {
    fn default() -> Self {
        Self { change_interval: 4.0, dir_jitter: 1.0, speed_jitter: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindSample {
    pub t: f64,
    /// Direction the wind blows from, degrees in `[0, 360)`.
    pub direction: f64,
    /// m/s, never negative.
    pub speed: f64,
}

fn clamped_normal<R: Rng + ?Sized>(rng: &mut R, lower: f64, upper: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    let mid = 0.5 * (lower + upper);
    (mid + 0.25 * (upper - lower) * z).clamp(lower, upper)
}

/// Draws a new (direction, speed) target. Always consumes two normal
/// variates so configurations sharing a seed stay paired.
pub fn sample_target<R: Rng + ?Sized>(rng: &mut R, cfg: &WindConfig) -> (f64, f64) {
    let direction = clamped_normal(rng, cfg.dir_lower, cfg.dir_upper);
    let speed = clamped_normal(rng, cfg.speed_lower, cfg.speed_upper);
    (direction, speed)
}

/// Seeded wind generator yielding one sample per simulation step, starting
/// at `t = 0`.
#[derive(Debug, Clone)]
pub struct WindGenerator {
    rng: ChaCha8Rng,
    cfg: WindConfig,
    params: WindParams,
    dt: f64,
    steps_per_change: u64,
    step: u64,
    target: (f64, f64),
}

impl WindGenerator {
    pub fn new(seed: u64, cfg: WindConfig, params: WindParams, dt: f64) -> Result<Self> {
        let ratio = params.change_interval / dt;
        if !(dt > 0.0) || !(ratio >= 1.0) || (ratio - ratio.round()).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "dt {dt} must be positive and divide the wind change interval {}",
                params.change_interval
            )));
        }
        if !(params.dir_jitter >= 0.0) || !(params.speed_jitter >= 0.0) {
            return Err(Error::InvalidParams("wind jitter must be non-negative".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = sample_target(&mut rng, &cfg);
        Ok(Self { rng, cfg, params, dt, steps_per_change: ratio.round() as u64, step: 0, target })
    }

    pub fn config(&self) -> &WindConfig {
        &self.cfg
    }

    /// Target currently held (before jitter).
    pub fn target(&self) -> (f64, f64) {
        self.target
    }

    /// Produces the sample for the current step and advances one `dt`.
    pub fn next_sample(&mut self) -> WindSample {
        if self.step > 0 && self.step.is_multiple_of(self.steps_per_change) {
            self.target = sample_target(&mut self.rng, &self.cfg);
        }
        let jd: f64 = self.rng.sample(StandardNormal);
        let js: f64 = self.rng.sample(StandardNormal);
        let sample = WindSample {
            t: self.step as f64 * self.dt,
            direction: wrap_360(self.target.0 + self.params.dir_jitter * jd),
            speed: (self.target.1 + self.params.speed_jitter * js).max(0.0),
        };
        self.step += 1;
        sample
    }
}

impl Iterator for WindGenerator {
    type Item = WindSample;

    fn next(&mut self) -> Option<WindSample> {
        Some(self.next_sample())
    }
}

/// Time-ordered wind samples at uniform spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct WindLog {
    pub samples: Vec<WindSample>,
}

impl WindLog {
    /// Generates `round(duration / dt)` samples (at least one).
    pub fn generate(seed: u64, cfg: WindConfig, params: WindParams, duration: f64, dt: f64) -> Result<Self> {
        let generator = WindGenerator::new(seed, cfg, params, dt)?;
        let n = ((duration / dt).round() as usize).max(1);
        Ok(Self { samples: generator.take(n).collect() })
    }

    pub fn stats(&self) -> Result<WindStats> {
        wind_stats(&self.samples)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "direction_deg", "speed_ms"])?;
        for s in &self.samples {
            w.write_record([s.t.to_string(), s.direction.to_string(), s.speed.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Arithmetic mean and population standard deviation of both channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindStats {
    pub mean_dir: f64,
    pub sd_dir: f64,
    pub mean_speed: f64,
    pub sd_speed: f64,
}

pub(crate) fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (n, sum) = values.clone().fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    let mean = sum / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    (mean, var.sqrt())
}

/// Direction statistics are linear, not circular: every configuration stays
/// within ±40° of 180°.
pub fn wind_stats(samples: &[WindSample]) -> Result<WindStats> {
    if samples.is_empty() {
        return Err(Error::EmptyLog);
    }
    let (mean_dir, sd_dir) = mean_sd(samples.iter().map(|s| s.direction));
    let (mean_speed, sd_speed) = mean_sd(samples.iter().map(|s| s.speed));
    Ok(WindStats { mean_dir, sd_dir, mean_speed, sd_speed })
}
