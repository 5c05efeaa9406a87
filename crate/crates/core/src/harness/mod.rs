//! Batch experiment harness: grid definition, per-run seeding, parallel
//! execution, aggregation and the report files.

mod config;
mod grid;
mod output;
mod stats;
mod summary;

pub use config::{ExperimentParams, FileConfig};
pub use grid::{run_grid, run_single, stable_hash, ExperimentGrid, GridResult, RunKey, RunResult};
pub use output::{emit_summary, emit_wind_figures, load_logs, report_from_logs, run_windcheck, write_run_log};
pub use stats::{spearman, Aggregate};
pub use summary::{aggregate_runs, wind_sigma_series, SigmaPoint, SummaryRow, SUMMARY_HEADER};
