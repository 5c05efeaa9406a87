use proptest::prelude::*;
use sailperf::metrics::{normalize_series, relative_performance, rmse_of};

/// Streaming mean of squares, independent of the fold in `rmse_of`.
fn streaming_rmse(errors: &[f64]) -> f64 {
    let mut mean_sq = 0.0;
    for (k, e) in errors.iter().enumerate() {
        mean_sq += (e * e - mean_sq) / (k + 1) as f64;
    }
    mean_sq.sqrt()
}

proptest! {
    #[test]
    fn rmse_matches_streaming(errors in prop::collection::vec(-180.0..180.0f64, 1..500)) {
        let a = rmse_of(errors.iter().copied()).unwrap();
        let b = streaming_rmse(&errors);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn rel_perf_decreases_in_uncertainty(abs in 0.01..50.0f64, bd in 0.01..1.0f64, um in 0.01..200.0f64, bump in 0.001..50.0f64) {
        let low = relative_performance(abs, um, bd).unwrap();
        let high = relative_performance(abs, um + bump, bd).unwrap();
        prop_assert!(high < low);
    }

    #[test]
    fn rel_perf_scales_with_abs(abs in 0.0..50.0f64, um in 0.01..200.0f64, bd in 0.01..1.0f64, c in 0.01..100.0f64) {
        let base = relative_performance(abs, um, bd).unwrap();
        let scaled = relative_performance(c * abs, um, bd).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-9 * scaled.abs().max(1.0));
    }

    #[test]
    fn ranking_invariant_under_common_scale(
        runs in prop::collection::vec((0.1..20.0f64, 0.1..100.0f64, 0.01..1.0f64), 2..20),
        c in 0.01..100.0f64,
    ) {
        let rank = |scale: f64| {
            let rp: Vec<f64> = runs.iter().map(|&(a, u, b)| relative_performance(scale * a, u, b).unwrap()).collect();
            let mut idx: Vec<usize> = (0..rp.len()).collect();
            idx.sort_by(|&i, &j| rp[i].total_cmp(&rp[j]).then(i.cmp(&j)));
            idx
        };
        prop_assert_eq!(rank(1.0), rank(c));
    }

    #[test]
    fn normalized_in_unit_interval(v in prop::collection::vec(-1e3..1e3f64, 1..50)) {
        let n = normalize_series(&v).unwrap();
        prop_assert!(n.iter().all(|x| (0.0..=1.0).contains(x)));
        let distinct = v.iter().any(|&x| x != v[0]);
        if distinct {
            prop_assert!(n.contains(&0.0) && n.contains(&1.0));
        } else {
            prop_assert!(n.iter().all(|&x| x == 0.0));
        }
    }
}
