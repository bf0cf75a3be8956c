use postrate::priors::{
    sample_bernstein_density, sample_dp_cdf, sample_histogram, sample_sequence_prior, small_ball_estimate, BaseShape,
    BernsteinDirichletPrior, FunctionNorm, HistogramPrior, SequencePrior, StickBreakingDP,
};
use postrate::rng::rng_from_seed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn samplers_repeat_bit_for_bit(seed in any::<u64>()) {
        let seq = SequencePrior::power(12, 1.0).unwrap();
        prop_assert_eq!(sample_sequence_prior(&seq, seed), sample_sequence_prior(&seq, seed));
        let hist = HistogramPrior::new(9, 2.0, 3.0).unwrap();
        prop_assert_eq!(sample_histogram(&hist, seed), sample_histogram(&hist, seed));
        let dp = StickBreakingDP::new(1.5, 0.0, 1.0, BaseShape::Normal).unwrap();
        prop_assert_eq!(sample_dp_cdf(&dp, seed), sample_dp_cdf(&dp, seed));
        let bern = BernsteinDirichletPrior::geometric(10, 0.5, 0.5, 2.0).unwrap();
        prop_assert_eq!(
            sample_bernstein_density(&bern, seed).unwrap(),
            sample_bernstein_density(&bern, seed).unwrap()
        );
    }
}

#[test]
fn dp_cdfs_are_monotone_with_unit_mass() {
    let dp = StickBreakingDP::new(3.0, 0.5, 0.25, BaseShape::Logistic).unwrap();
    let mut rng = rng_from_seed(5);
    let grid: Vec<f64> = (0..50).map(|i| -1.0 + 3.0 * i as f64 / 49.0).collect();
    for _ in 0..10_000 {
        let h = dp.sample(&mut rng);
        assert!((h.total_mass() + h.residual - 1.0).abs() < 1e-12);
        assert!(h.residual < 1e-8);
        let v: Vec<f64> = grid.iter().map(|&t| h.eval(t)).collect();
        assert!(v.windows(2).all(|w| w[0] <= w[1]) && v.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }
}

#[test]
fn histogram_small_ball_matches_product_formula() {
    let m = 2.0;
    for (k, eps) in [(1, 0.5), (2, 1.0), (3, 1.2), (4, 1.5), (5, 1.6)] {
        let prior = HistogramPrior::new(k, m, 1.0).unwrap();
        // One grid point per cell makes the tabulated sup norm exact.
        let grid: Vec<f64> = (0..k).map(|i| -1.0 + (2.0 * i as f64 + 1.0) / k as f64).collect();
        let tab = |rng: &mut postrate::rng::Rng| {
            let f = prior.sample(rng);
            grid.iter().map(|&x| f.eval(x)).collect::<Vec<f64>>()
        };
        let est = small_ball_estimate(tab, &vec![0.0; k], eps, FunctionNorm::Sup, 100_000, 30 + k as u64).unwrap();
        let exact = (eps / m).powi(k as i32);
        assert!((est.estimate - exact).abs() <= 4.0 * est.std_error, "K = {k}: {} vs {exact}", est.estimate);
    }
}
