use std::fs;

use sailperf::harness::{
    emit_summary, emit_wind_figures, load_logs, report_from_logs, run_grid, run_single, run_windcheck,
    write_run_log, ExperimentGrid, ExperimentParams, RunKey, SUMMARY_HEADER,
};
use sailperf::wind::WindLabel;

fn small_grid() -> ExperimentGrid {
    ExperimentGrid {
        courses: vec![25, 100],
        configs: WindLabel::ALL.to_vec(),
        fou_sizes: vec![0, 10],
        repeats: 3,
        base_seed: 11,
        paired: true,
    }
}

#[test]
fn cell_alone_matches_cell_in_grid() {
    let params = ExperimentParams::default();
    let full = run_grid(&small_grid(), &params, |_, _| Ok(())).unwrap();
    let alone = ExperimentGrid { courses: vec![100], configs: vec![WindLabel::F], fou_sizes: vec![10], ..small_grid() };
    let single = run_grid(&alone, &params, |_, _| Ok(())).unwrap();
    assert_eq!(single.summary.len(), 1);
    let cell = full.summary.iter().find(|s| s.course == 100 && s.config == WindLabel::F && s.fou == 10).unwrap();
    assert_eq!(&single.summary[0], cell);
    // and a single run rebuilt from its key and seed
    let run = &single.runs[2];
    let log = run_single(&run.key, run.seed.unwrap(), &params).unwrap();
    let m = sailperf::metrics::compute_metrics(&log, &params.metrics).unwrap();
    assert_eq!(m, run.metrics);
}

#[test]
fn aggregates_are_sane() {
    let res = run_grid(&small_grid(), &ExperimentParams::default(), |_, _| Ok(())).unwrap();
    assert_eq!(res.runs.len(), small_grid().len());
    assert_eq!(res.summary.len(), 2 * 9 * 2);
    for s in &res.summary {
        assert_eq!(s.runs, 3);
        for a in [s.rmse, s.uncertainty, s.difficulty, s.rel_perf] {
            assert!(a.min <= a.mean && a.mean <= a.max);
            assert!(a.sd >= 0.0 && a.mean.is_finite());
        }
        assert_eq!(s.completion_rate, 1.0);
    }
    for r in &res.runs {
        let m = r.metrics;
        for v in [m.rmse, m.abs_perf, m.uncertainty_measure, m.base_difficulty, m.rel_perf] {
            assert!(v.is_finite());
        }
        assert!(m.base_difficulty >= 0.01 && m.base_difficulty <= 1.0);
    }
}

#[test]
fn summary_files() {
    let res = run_grid(&small_grid(), &ExperimentParams::default(), |_, _| Ok(())).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = emit_summary(&res.summary, dir.path(), true).unwrap();
    assert_eq!(written.len(), 4);
    let csv = fs::read_to_string(dir.path().join("summary/25_10.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    assert_eq!(lines.len(), 10);
    let configs: String = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(configs, "ABCDEFGHI");

    let norm = fs::read_to_string(dir.path().join("summary/25_10_normalized.csv")).unwrap();
    let rp: Vec<f64> = norm.lines().skip(1).map(|l| l.split(',').nth(9).unwrap().parse().unwrap()).collect();
    assert_eq!(rp.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
    assert_eq!(rp.iter().copied().fold(f64::NEG_INFINITY, f64::max), 1.0);

    let md = fs::read_to_string(dir.path().join("summary/100_0.md")).unwrap();
    assert!(md.contains("| Wind Config. | Uncertainty Measure | Perf_Absolute | Base Difficulty | Perf_Relative |"));
    assert_eq!(md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| Wind")).count(), 9);
}

#[test]
fn empty_summary_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    assert!(emit_summary(&[], dir.path(), false).is_err());
    assert!(!dir.path().join("summary").exists());
}

#[test]
fn report_reproduces_in_memory_summary() {
    let params = ExperimentParams::default();
    let grid = ExperimentGrid { courses: vec![50], fou_sizes: vec![0, 25], repeats: 2, ..small_grid() };
    let dir = tempfile::tempdir().unwrap();
    let res = run_grid(&grid, &params, |key, log| write_run_log(dir.path(), key, log).map(|_| ())).unwrap();
    let logs = load_logs(dir.path(), &params).unwrap();
    assert_eq!(logs.len(), grid.len());
    assert_eq!(logs[0].0, RunKey { course: 50, config: WindLabel::A, fou: 0, repeat: 0 });
    let rebuilt = report_from_logs(dir.path(), &params).unwrap();
    assert_eq!(rebuilt.summary, res.summary);
}

#[test]
fn report_without_logs_fails() {
    let dir = tempfile::tempdir().unwrap();
    assert!(report_from_logs(dir.path(), &ExperimentParams::default()).is_err());
    fs::create_dir_all(dir.path().join("logs")).unwrap();
    fs::write(dir.path().join("logs/readme.txt"), "x").unwrap();
    assert!(report_from_logs(dir.path(), &ExperimentParams::default()).is_err());
}

#[test]
fn wind_figure_series() {
    let params = ExperimentParams::default();
    let pts = run_windcheck(&WindLabel::ALL, 30, 5, 200.0, &params).unwrap();
    let labels: Vec<WindLabel> = pts.iter().map(|p| p.config).collect();
    assert_eq!(labels, WindLabel::ALL.to_vec());
    // direction: low/mid/high repeated across the three speed blocks
    for block in pts.chunks(3) {
        assert!(block[0].sigma_dir < block[1].sigma_dir && block[1].sigma_dir < block[2].sigma_dir);
    }
    // speed: blocked by speed level
    let speed_block: Vec<f64> = pts.chunks(3).map(|b| b.iter().map(|p| p.sigma_speed).sum::<f64>() / 3.0).collect();
    assert!(speed_block[0] < speed_block[1] && speed_block[1] < speed_block[2]);
    for block in pts.chunks(3) {
        let spread = block.iter().map(|p| p.sigma_speed).fold(0.0, f64::max)
            - block.iter().map(|p| p.sigma_speed).fold(f64::INFINITY, f64::min);
        assert!(spread < 0.1, "speed sigma within a block should be similar");
    }
    // A ties with the other jitter-only channels (D, G on direction; B, C on
    // speed), so it is the minimum up to sampling noise
    let a = pts[0];
    assert!(pts.iter().all(|p| p.sigma_dir >= 0.98 * a.sigma_dir && p.sigma_speed >= 0.98 * a.sigma_speed));

    let dir = tempfile::tempdir().unwrap();
    let path = emit_wind_figures(&pts, dir.path()).unwrap();
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("config,sigma_dir,sigma_speed,runs\nA,"));
    assert_eq!(text.lines().count(), 10);
}
