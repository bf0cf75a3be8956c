use nalgebra::{DMatrix, DVector};
use postrate::regression::{design_gram, posterior_beta, spline_norm_ratio, uniform_design, RegressionData, SplineBasis};
use postrate::rng::rng_from_seed;
use proptest::prelude::*;
use rand::Rng as _;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn basis_partition_of_unity(order in 1usize..=4, intervals in 1usize..=64, x in 0.0..=1.0f64) {
        let b = SplineBasis::new(order, intervals).unwrap();
        let v = b.eval(x).unwrap();
        prop_assert_eq!(v.len(), intervals + order - 1);
        prop_assert!(v.iter().all(|&w| w >= 0.0));
        prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(v.iter().filter(|&&w| w > 0.0).count() <= order);
    }
}

/// Grid oracle for a two-coefficient posterior under the `N(0, I)` prior.
fn grid_posterior_2d(b: &DMatrix<f64>, x: &[f64], sigma: f64, center: [f64; 2], half: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let m = 801;
    let h = 2.0 * half / (m - 1) as f64;
    let axis = |c: f64| (0..m).map(move |i| c - half + h * i as f64);
    let logp = |b1: f64, b2: f64| {
        let rss: f64 = (0..x.len()).map(|i| (x[i] - b[(i, 0)] * b1 - b[(i, 1)] * b2).powi(2)).sum();
        -0.5 * rss / (sigma * sigma) - 0.5 * (b1 * b1 + b2 * b2)
    };
    let l0 = logp(center[0], center[1]);
    let (mut z, mut s1, mut s2, mut s11, mut s12, mut s22) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for b1 in axis(center[0]) {
        for b2 in axis(center[1]) {
            let w = (logp(b1, b2) - l0).exp();
            z += w;
            s1 += w * b1;
            s2 += w * b2;
            s11 += w * b1 * b1;
            s12 += w * b1 * b2;
            s22 += w * b2 * b2;
        }
    }
    let (m1, m2) = (s1 / z, s2 / z);
    ([m1, m2], [[s11 / z - m1 * m1, s12 / z - m1 * m2], [s12 / z - m1 * m2, s22 / z - m2 * m2]])
}

#[test]
fn toy_posteriors_match_grid() {
    let mut rng = rng_from_seed(12);
    // Two indicator functions, then two hat functions.
    for (order, intervals) in [(1, 2), (2, 1)] {
        let basis = SplineBasis::new(order, intervals).unwrap();
        for _ in 0..3 {
            let n = rng.random_range(5..25);
            let design = uniform_design(n);
            let x: Vec<f64> = design.iter().map(|z| z + rng.random_range(-1.0..1.0)).collect();
            let data = RegressionData { design: design.clone(), x: x.clone(), sigma: 0.7, seed: 0 };
            let post = posterior_beta(&data, &basis).unwrap();
            let sd = post.covariance.diagonal().map(f64::sqrt).max();
            let (m, c) = grid_posterior_2d(&basis.matrix(&design).unwrap(), &x, 0.7, [post.mean[0], post.mean[1]], 12.0 * sd);
            for i in 0..2 {
                assert!((m[i] - post.mean[i]).abs() < 1e-6);
                for j in 0..2 {
                    assert!((c[i][j] - post.covariance[(i, j)]).abs() < 1e-6, "{} vs {}", c[i][j], post.covariance[(i, j)]);
                }
            }
        }
    }
}

#[test]
fn norm_equivalence_constants_bounded() {
    let mut rng = rng_from_seed(4);
    let n = 2000;
    let design = uniform_design(n);
    let mut extremes = Vec::new();
    for j in [4, 8, 16, 32, 64, 128] {
        let basis = SplineBasis::with_dim(3, j).unwrap();
        let gram = design_gram(&basis, &design).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..20 {
            let b1: Vec<f64> = (0..j).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b2: Vec<f64> = (0..j).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r = spline_norm_ratio(&basis, &design, &b1, &b2).unwrap();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        extremes.push((j, gram.lambda_min_j, gram.lambda_max_j, lo, hi));
        for v in [gram.lambda_min_j.sqrt(), gram.lambda_max_j.sqrt(), lo, hi] {
            assert!((0.05..=20.0).contains(&v), "J = {j}: constant {v}");
        }
    }
    println!("(J, J lambda_min, J lambda_max, ratio min, ratio max): {extremes:.3?}");
}

#[test]
fn posterior_mean_is_stationary_point() {
    let mut rng = rng_from_seed(8);
    for j in [5, 12, 30] {
        let basis = SplineBasis::with_dim(3, j).unwrap();
        let design = uniform_design(300);
        let x: Vec<f64> = design.iter().map(|z| (6.0 * z).cos() + rng.random_range(-0.5..0.5)).collect();
        let sigma = 0.4;
        let data = RegressionData { design: design.clone(), x: x.clone(), sigma, seed: 0 };
        let post = posterior_beta(&data, &basis).unwrap();
        // Gradient of |x − Bβ|²/(2σ²) + |β|²/2.
        let b = basis.matrix(&design).unwrap();
        let resid = DVector::from_column_slice(&x) - &b * &post.mean;
        let grad = &post.mean - b.tr_mul(&resid) / (sigma * sigma);
        let scale = (b.tr_mul(&DVector::from_column_slice(&x)) / (sigma * sigma)).amax();
        assert!(grad.amax() <= 1e-8 * scale.max(1.0), "J = {j}: gradient {}", grad.amax());
    }
}
