use postrate::covering::poisson_bracketing;
use postrate::divergences::{hellinger_sq, Density};
use postrate::inid::{
    binary_posterior_is, hellinger_bernoulli, importance_sample, sieve_posterior, simulate_poisson, BinaryModel,
    DpMixturePrior, LinkFn, PoissonSieve,
};
use postrate::rng::rng_from_seed;
use postrate::stats::softmax;
use proptest::prelude::*;
use rand::Rng as _;
use rand_distr::StandardNormal;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bernoulli_hellinger_matches_general(p in 0.0..=1.0f64, q in 0.0..=1.0f64) {
        let general = hellinger_sq(&Density::Bernoulli { p }, &Density::Bernoulli { p: q }).unwrap();
        prop_assert!((hellinger_bernoulli(p, q) - general).abs() < 1e-12);
    }

    #[test]
    fn softmax_ignores_common_shift(ll in prop::collection::vec(-500.0..0.0f64, 1..40), c in -1e3..1e3f64) {
        let a = softmax(&ll);
        let b = softmax(&ll.iter().map(|v| v + c).collect::<Vec<f64>>());
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
    }
}

#[test]
fn sieve_posterior_is_normalized() {
    let z: Vec<f64> = (1..=12).map(|i| i as f64 / 12.0).collect();
    let b = poisson_bracketing(0.35, 1.0, 3.0, &z).unwrap();
    let sieve = PoissonSieve::from_bracketing(&b, z.clone(), 100_000).unwrap();
    let mut rng = rng_from_seed(2);
    for _ in 0..20 {
        let means: Vec<f64> = z.iter().map(|&t| 1.0 + 2.0 * t * t).collect();
        let counts = simulate_poisson(&means, &mut rng);
        let post = sieve_posterior(&sieve, &counts).unwrap();
        assert_eq!(post.len(), sieve.links.len());
        assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn importance_sampling_recovers_conjugate_mean() {
    // θ ~ N(0, 1), x | θ ~ N(θ, 1/m): posterior mean m x/(m + 1).
    let (x, m) = (0.8, 4.0);
    let mut rng = rng_from_seed(3);
    let is = importance_sample(
        50_000,
        &mut rng,
        |r| r.sample::<f64, _>(StandardNormal),
        |t| -0.5 * m * (x - t).powi(2),
        |t| *t,
    );
    assert!(is.reliable());
    let exact = m * x / (m + 1.0);
    assert!((is.mean() - exact).abs() <= 4.0 * is.mean_std_error(), "{} vs {exact}", is.mean());
}

#[test]
fn binary_is_means_stable_under_doubling() {
    let n = 60;
    let model = BinaryModel::new((1..=n).map(|i| i as f64 / (n + 1) as f64).collect(), LinkFn::Logistic { location: 0.5, scale: 0.25 }).unwrap();
    let x = model.simulate(&mut rng_from_seed(4));
    let prior = DpMixturePrior::default();
    let mid = n / 2;
    let small = binary_posterior_is(&model, &x, &prior, 10_000, 11, |h| h[mid]).unwrap();
    let large = binary_posterior_is(&model, &x, &prior, 20_000, 12, |h| h[mid]).unwrap();
    let se = small.mean_std_error().hypot(large.mean_std_error());
    assert!((small.mean() - large.mean()).abs() <= 4.0 * se, "{} vs {} (se {se})", small.mean(), large.mean());
}
