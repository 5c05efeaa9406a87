//! Command-line front end for the sailing experiment harness.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sailperf::harness::{
    emit_summary, emit_wind_figures, report_from_logs, run_grid, run_single, run_windcheck, wind_sigma_series,
    write_run_log, ExperimentGrid, ExperimentParams, FileConfig, GridResult, RunKey, SummaryRow,
};
use sailperf::wind::WindLabel;

#[derive(Parser)]
#[command(name = "sailperf", version, about = "Fuzzy sailing experiments with uncertainty-weighted metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full or a filtered experiment grid.
    Run {
        #[command(flatten)]
        common: Common,
        /// Skip writing per-run logs.
        #[arg(long)]
        no_logs: bool,
        /// Draw independent wind seeds for each FOU size.
        #[arg(long)]
        unpaired: bool,
    },
    /// Run one simulation and dump its log as CSV.
    Single {
        #[command(flatten)]
        common: Common,
    },
    /// Recompute summaries from logs stored under the output directory.
    Report {
        #[command(flatten)]
        common: Common,
    },
    /// Wind-process statistics only.
    Windcheck {
        #[command(flatten)]
        common: Common,
        /// Simulated seconds per wind log.
        #[arg(long, default_value_t = 300.0)]
        duration: f64,
    },
}

#[derive(Args)]
struct Common {
    /// Course vertical offsets in metres (25, 50, 100).
    #[arg(long, value_delimiter = ',')]
    course: Vec<u32>,
    /// Wind configuration labels A..I.
    #[arg(long, value_delimiter = ',', value_parser = parse_label)]
    config: Vec<WindLabel>,
    /// FOU sizes (0, 5, 10, 15, 20, 25).
    #[arg(long, value_delimiter = ',')]
    fou: Vec<u32>,
    #[arg(long)]
    repeats: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// TOML config file; flags given on the command line take precedence.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Use min-max normalized columns in markdown tables and console output.
    #[arg(long)]
    normalized: bool,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_label(s: &str) -> std::result::Result<WindLabel, String> {
    s.parse().map_err(|e: sailperf::Error| e.to_string())
}

/// Command line merged over the config file merged over defaults.
struct Settings {
    grid: ExperimentGrid,
    params: ExperimentParams,
    out_dir: Option<PathBuf>,
    normalized: bool,
    write_logs: bool,
}

impl Settings {
    fn resolve(common: &Common) -> Result<Self> {
        let file = match &common.params {
            Some(path) => FileConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => FileConfig::default(),
        };
        let defaults = ExperimentGrid::default();
        let pick = |cli: &Vec<u32>, file: &Option<Vec<u32>>, default: Vec<u32>| {
            if !cli.is_empty() {
                cli.clone()
            } else {
                file.clone().unwrap_or(default)
            }
        };
        let grid = ExperimentGrid {
            courses: pick(&common.course, &file.course, defaults.courses),
            configs: if common.config.is_empty() {
                file.config.clone().unwrap_or(defaults.configs)
            } else {
                common.config.clone()
            },
            fou_sizes: pick(&common.fou, &file.fou, defaults.fou_sizes),
            repeats: common.repeats.or(file.repeats).unwrap_or(defaults.repeats),
            base_seed: common.seed.or(file.seed).unwrap_or(defaults.base_seed),
            paired: file.paired.unwrap_or(defaults.paired),
        };
        let workers = common.workers.or(file.workers).unwrap_or(0);
        if workers > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build_global()
                .context("configuring worker pool")?;
        }
        Ok(Self {
            params: file.params(),
            out_dir: common.out_dir.clone().or(file.out_dir.clone()),
            normalized: common.normalized || file.normalized.unwrap_or(false),
            write_logs: file.write_logs.unwrap_or(true),
            grid,
        })
    }

    fn out_dir(&self) -> &Path {
        self.out_dir.as_deref().unwrap_or(Path::new("out"))
    }
}

fn print_rows(rows: &[SummaryRow], normalized: bool) {
    let mut stdout = io::stdout().lock();
    let _ = writeln!(stdout, "course config fou   runs  mean_rmse     mean_um   mean_bd     mean_rp  completion");
    let mut printed = rows.to_vec();
    if normalized {
        // normalize within each (course, fou) table
        let mut keys: Vec<(u32, u32)> = rows.iter().map(|r| (r.course, r.fou)).collect();
        keys.sort_unstable();
        keys.dedup();
        for (course, fou) in keys {
            let idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].course == course && rows[i].fou == fou).collect();
            let fields: [fn(&mut SummaryRow) -> &mut f64; 4] = [
                |r| &mut r.rmse.mean,
                |r| &mut r.uncertainty.mean,
                |r| &mut r.difficulty.mean,
                |r| &mut r.rel_perf.mean,
            ];
            for field in fields {
                let vals: Vec<f64> = idx.iter().map(|&i| *field(&mut printed[i])).collect();
                let scaled = sailperf::metrics::normalize_series(&vals).expect("nonempty table");
                for (&i, v) in idx.iter().zip(scaled) {
                    *field(&mut printed[i]) = v;
                }
            }
        }
    }
    for r in &printed {
        let _ = writeln!(
            stdout,
            "{:>6} {:>6} {:>3} {:>6} {:>10.4} {:>11.4} {:>9.4} {:>11.6} {:>11.2}",
            r.course, r.config.to_string(), r.fou, r.runs, r.rmse.mean, r.uncertainty.mean, r.difficulty.mean, r.rel_perf.mean,
            r.completion_rate
        );
    }
}

fn emit_all(res: &GridResult, s: &Settings) -> Result<()> {
    let out = s.out_dir();
    emit_summary(&res.summary, out, s.normalized)?;
    let sigma = wind_sigma_series(res.runs.iter().map(|r| (r.key.config, r.metrics.sd_dir, r.metrics.sd_speed)));
    emit_wind_figures(&sigma, out)?;
    print_rows(&res.summary, s.normalized);
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn cmd_run(common: &Common, no_logs: bool, unpaired: bool) -> Result<()> {
    let mut s = Settings::resolve(common)?;
    if unpaired {
        s.grid.paired = false;
    }
    let write_logs = s.write_logs && !no_logs;
    s.grid.validate()?;
    eprintln!("running {} simulations", s.grid.len());
    let out = s.out_dir().to_path_buf();
    let res = run_grid(&s.grid, &s.params, |key, log| {
        if write_logs {
            write_run_log(&out, key, log)?;
        }
        Ok(())
    })?;
    emit_all(&res, &s)
}

fn only<T: Copy + std::fmt::Display>(name: &str, values: &[T]) -> Result<T> {
    match values {
        [v] => Ok(*v),
        _ => bail!("single needs exactly one --{name}, got {}", values.len()),
    }
}

fn cmd_single(common: &Common) -> Result<()> {
    let s = Settings::resolve(common)?;
    let key = RunKey {
        course: only("course", &s.grid.courses)?,
        config: only("config", &s.grid.configs)?,
        fou: only("fou", &s.grid.fou_sizes)?,
        repeat: 0,
    };
    s.grid.validate()?;
    let log = run_single(&key, s.grid.base_seed, &s.params)?;
    let m = sailperf::metrics::compute_metrics(&log, &s.params.metrics)?;
    match &s.out_dir {
        Some(dir) => {
            let path = write_run_log(dir, &key, &log)?;
            eprintln!("wrote {}", path.display());
        }
        None => log.write_csv(io::stdout().lock())?,
    }
    eprintln!(
        "{key}: {:?} after {} steps, rmse {:.4}, um {:.4}, bd {:.4}, rp {:.6}",
        log.outcome,
        log.len(),
        m.rmse,
        m.uncertainty_measure,
        m.base_difficulty,
        m.rel_perf
    );
    Ok(())
}

fn cmd_report(common: &Common) -> Result<()> {
    let s = Settings::resolve(common)?;
    let res = report_from_logs(s.out_dir(), &s.params)?;
    emit_all(&res, &s)
}

fn cmd_windcheck(common: &Common, duration: f64) -> Result<()> {
    let s = Settings::resolve(common)?;
    if duration.is_nan() || duration <= 0.0 {
        bail!("--duration must be positive");
    }
    let points = run_windcheck(&s.grid.configs, s.grid.repeats, s.grid.base_seed, duration, &s.params)?;
    let path = emit_wind_figures(&points, s.out_dir())?;
    println!("config  sigma_dir  sigma_speed");
    for p in &points {
        println!("{:>6} {:>10.4} {:>12.4}", p.config.to_string(), p.sigma_dir, p.sigma_speed);
    }
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { common, no_logs, unpaired } => cmd_run(common, *no_logs, *unpaired),
        Command::Single { common } => cmd_single(common),
        Command::Report { common } => cmd_report(common),
        Command::Windcheck { common, duration } => cmd_windcheck(common, *duration),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
