use postrate::divergences::{kl, v_k0, Density};
use postrate::harness::ContractionModel;
use postrate::priors::SequencePrior;
use postrate::rng::rng_from_seed;
use postrate::stats::{median, std_error};
use postrate::whitenoise::{kl_whitenoise, posterior, WhiteNoiseData, WhiteNoiseModel};
use rand::Rng as _;

/// Mean and variance of `exp(log_density)` on a fine trapezoid grid.
fn grid_moments(log_density: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let h = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| lo + h * i as f64).collect();
    let lmax = xs.iter().map(|&x| log_density(x)).fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (log_density(x) - lmax).exp() * if i == 0 || i == points - 1 { 0.5 } else { 1.0 })
        .collect();
    let z: f64 = w.iter().sum();
    let m = xs.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / z;
    let v = xs.iter().zip(&w).map(|(x, w)| (x - m).powi(2) * w).sum::<f64>() / z;
    (m, v)
}

#[test]
fn conjugate_posterior_matches_grid() {
    let mut rng = rng_from_seed(101);
    for _ in 0..50 {
        let n = rng.random_range(1..5000);
        let s2: f64 = rng.random_range(0.001..2.0);
        let x: f64 = rng.random_range(-2.0..2.0);
        let post = posterior(&WhiteNoiseData { n, x: vec![x], seed: 0 }, &SequencePrior::new(vec![s2], 1.0).unwrap()).unwrap();
        let nf = n as f64;
        let log_post = |t: f64| -0.5 * nf * (x - t).powi(2) - 0.5 * t * t / s2;
        let sd = post.variances[0].sqrt();
        let (m, v) = grid_moments(log_post, post.means[0] - 14.0 * sd, post.means[0] + 14.0 * sd, 20_001);
        assert!((m - post.means[0]).abs() < 1e-6, "mean {m} vs {}", post.means[0]);
        assert!((v - post.variances[0]).abs() < 1e-6, "variance {v} vs {}", post.variances[0]);
    }
}

#[test]
fn experiment_divergences_are_sums_of_normal_divergences() {
    let mut rng = rng_from_seed(7);
    for _ in 0..20 {
        let k = rng.random_range(1..30);
        let n = rng.random_range(1..2000);
        let t0: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let var = 1.0 / n as f64;
        let (mut kl_sum, mut v_sum) = (0.0, 0.0);
        for (a, b) in t0.iter().zip(&t) {
            let (p, q) = (Density::normal(*a, var).unwrap(), Density::normal(*b, var).unwrap());
            kl_sum += kl(&p, &q).unwrap();
            v_sum += v_k0(&p, &q, 2.0).unwrap();
        }
        let (kw, vw) = kl_whitenoise(&t0, &t, n);
        assert!((kw - kl_sum).abs() < 1e-10 * kw.max(1.0), "{kw} vs {kl_sum}");
        assert!((vw - v_sum).abs() < 1e-6 * vw.max(1.0), "{vw} vs {v_sum}");
    }
}

#[test]
fn median_radius_nonincreasing() {
    let model = WhiteNoiseModel::default();
    let mut last: Option<(f64, f64)> = None;
    for (i, n) in [256, 1024, 4096, 16384].into_iter().enumerate() {
        let r: Vec<f64> = (0..30)
            .map(|j| model.replicate(n, postrate::rng::derive_seed(3, "white-noise", i, j), 500, 0.9, &[]).unwrap().radius)
            .collect();
        let (med, se) = (median(&r), std_error(&r));
        if let Some((prev, prev_se)) = last {
            assert!(med <= prev + prev_se.max(se), "n = {n}: {med} after {prev}");
        }
        last = Some((med, se));
    }
}
