use postrate::hypothesis::{aggregate_test, run_suite, whitenoise_shells, Suite};
use postrate::stats::norm_sf;

#[test]
fn aggregate_bookkeeping_is_exact() {
    let theta0 = [0.2, -0.1];
    let n = 64;
    let eps = 2.0 / (n as f64).sqrt();
    let shells = whitenoise_shells(&theta0, eps, 3, 60, 5).unwrap();
    let rep = aggregate_test(&theta0, &shells, n, eps, 4000, 6).unwrap();
    let per_point: f64 = rep.shells.iter().flat_map(|s| s.point_type_one.iter()).sum();
    assert!((rep.type_one_accounting - per_point).abs() < 1e-12);
    // Union bound holds draw by draw.
    assert!(rep.type_one <= rep.type_one_accounting + 1e-12);
    let series: f64 = shells
        .iter()
        .flat_map(|s| s.net.iter())
        .map(|t| {
            let d = t.iter().zip(&theta0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            norm_sf((n as f64).sqrt() * d / 2.0)
        })
        .sum();
    assert!((rep.series_bound - series).abs() < 1e-12);
    for (s, r) in shells.iter().zip(&rep.shells) {
        assert_eq!(s.net.len(), r.net_size);
        assert_eq!(r.point_type_one.len(), r.net_size);
    }
    let tr = rep.to_report();
    assert_eq!(tr.type_one, rep.type_one);
    assert_eq!(tr.type_one_bound, rep.series_bound);
}

#[test]
fn every_suite_within_bounds() {
    for suite in [Suite::Lemma5, Suite::Lemma2, Suite::Lemma9, Suite::Lemma10] {
        for r in run_suite(suite, 20_000, 3).unwrap() {
            assert!(r.within_bounds(), "{suite:?}: {r:?}");
        }
    }
}
