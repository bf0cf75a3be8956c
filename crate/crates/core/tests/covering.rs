use postrate::covering::{
    greedy_cover, monotone_class_entropy, poisson_bracketing, sample_ball, euclidean_ball_cover_bound, Metric,
    PointCloud,
};
use postrate::rng::rng_from_seed;
use proptest::prelude::*;
use rand::Rng as _;

fn is_cover(cloud: &PointCloud, centers: &[usize], eps: f64) -> bool {
    cloud.points.iter().all(|p| centers.iter().any(|&c| cloud.metric.distance(p, &cloud.points[c]) <= eps))
}

/// Smallest cover with centers taken from the cloud, by subset enumeration.
fn minimal_cover(cloud: &PointCloud, eps: f64) -> usize {
    let m = cloud.points.len();
    (1..=m)
        .find(|&k| {
            (0u32..1 << m).filter(|s| s.count_ones() as usize == k).any(|s| {
                let centers: Vec<usize> = (0..m).filter(|i| s >> i & 1 == 1).collect();
                is_cover(cloud, &centers, eps)
            })
        })
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_is_a_valid_cover(pts in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 2), 1..12), eps in 0.05..1.5f64) {
        let cloud = PointCloud { points: pts, metric: Metric::Euclidean };
        let cover = greedy_cover(&cloud, eps).unwrap();
        prop_assert!(is_cover(&cloud, &cover.centers, eps));
        for (i, &a) in cover.centers.iter().enumerate() {
            for &b in &cover.centers[..i] {
                prop_assert!(cloud.metric.distance(&cloud.points[a], &cloud.points[b]) > eps);
            }
        }
    }

    // In one dimension an eps-ball holds at most two points more than eps
    // apart, so greedy is within a factor 2 of the minimal cover.
    #[test]
    fn greedy_within_factor_two_on_the_line(pts in prop::collection::vec(-1.0..1.0f64, 1..=12), eps in 0.05..1.0f64) {
        let cloud = PointCloud { points: pts.into_iter().map(|x| vec![x]).collect(), metric: Metric::Euclidean };
        let greedy = greedy_cover(&cloud, eps).unwrap().centers.len();
        prop_assert!(greedy <= 2 * minimal_cover(&cloud, eps));
    }

    #[test]
    fn monotone_brackets_contain_and_are_narrow(eps in 0.15..0.9f64, seed in 0u64..1000) {
        let grid = 40;
        let b = monotone_class_entropy(eps, grid).unwrap();
        let mut rng = rng_from_seed(seed);
        let mut psi: Vec<f64> = (0..grid).map(|_| rng.random::<f64>()).collect();
        psi.sort_by(f64::total_cmp);
        let (l, u) = b.bracket_of(&psi).unwrap();
        prop_assert!(l.iter().zip(&psi).zip(&u).all(|((l, p), u)| l <= p && p <= u));
        let width = (l.iter().zip(&u).map(|(a, b)| (b - a).powi(2)).sum::<f64>() / grid as f64).sqrt();
        prop_assert!(width <= b.width_bound + 1e-12 && b.width_bound <= eps * (1.0 + 1e-9));
    }

    #[test]
    fn poisson_upper_brackets_dominate(eps in 0.1..0.8f64, seed in 0u64..1000) {
        let mut rng = rng_from_seed(seed);
        let mut z: Vec<f64> = (0..60).map(|_| rng.random::<f64>()).collect();
        let s = poisson_bracketing(eps, 1.0, 2.0, &z).unwrap();
        let mut link: Vec<f64> = (0..60).map(|_| rng.random_range(1.0..=2.0)).collect();
        // Nondecreasing in the covariate.
        let mut idx: Vec<usize> = (0..60).collect();
        idx.sort_by(|&a, &b| z[a].total_cmp(&z[b]));
        link.sort_by(f64::total_cmp);
        let mut by_cov = vec![0.0; 60];
        for (rank, &i) in idx.iter().enumerate() {
            by_cov[i] = link[rank];
        }
        let u = s.upper_bracket_of(&by_cov).unwrap();
        prop_assert!(u.iter().zip(&by_cov).all(|(u, l)| u >= l));
        let d = (u.iter().zip(&by_cov).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 60.0).sqrt();
        prop_assert!(d <= eps + 1e-12);
        z.clear();
    }
}

#[test]
fn ball_cover_below_volumetric_bound() {
    let mut rng = rng_from_seed(17);
    let cloud = PointCloud { points: sample_ball(3, 1.0, 10_000, &mut rng), metric: Metric::Euclidean };
    let cover = greedy_cover(&cloud, 0.25).unwrap();
    assert!((cover.centers.len() as f64).ln() <= 3.0 * 12f64.ln());
    assert_eq!(euclidean_ball_cover_bound(3, 1.0, 0.25).unwrap(), 3.0 * 12f64.ln());
}

#[test]
fn monotone_entropy_constant_reported() {
    let mut products = Vec::new();
    for eps in [0.4, 0.2, 0.1, 0.05] {
        let b = monotone_class_entropy(eps, 100_000).unwrap();
        products.push(b.log_count * eps);
    }
    println!("log N * eps over eps = 0.4, 0.2, 0.1, 0.05: {products:.3?}");
    assert!(products.iter().all(|p| p.is_finite() && *p > 0.0));
}
