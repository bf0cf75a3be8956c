//! Covering numbers, greedy covers and the bracketings behind the sieves.

use postrate::covering::{
    cover_interval, euclidean_ball_cover_bound, greedy_cover, monotone_class_entropy, poisson_bracketing, sample_ball,
    simplex_entropy_bound, Metric, PointCloud,
};
use postrate::rng::rng_from_seed;

fn main() -> postrate::Result<()> {
    println!("[0,1] at eps 0.05: {} intervals", cover_interval(0.05, 0.0, 1.0)?);

    let mut rng = rng_from_seed(3);
    for d in 1..=3 {
        let cloud = PointCloud { points: sample_ball(d, 1.0, 5000, &mut rng), metric: Metric::Euclidean };
        let cover = greedy_cover(&cloud, 0.25)?;
        println!(
            "unit ball, d = {d}: greedy log count {:.3}, bound {:.3}",
            (cover.centers.len() as f64).ln(),
            euclidean_ball_cover_bound(d, 1.0, 0.25)?
        );
    }

    println!("simplex, k = 5, eps = 0.1: log N <= {:.3}", simplex_entropy_bound(5, 0.1)?);

    for eps in [0.4, 0.2, 0.1, 0.05] {
        let b = monotone_class_entropy(eps, 2000)?;
        println!("monotone cdfs, eps = {eps}: log brackets {:.2}, times eps {:.3}", b.log_count, b.log_count * eps);
    }

    let z: Vec<f64> = (1..=500).map(|i| i as f64 / 500.0).collect();
    for eps in [0.2, 0.1, 0.05] {
        let s = poisson_bracketing(eps, 1.0, 2.0, &z)?;
        println!("Poisson links in [1, 2], eps = {eps}: log count {:.2}", s.log_count());
    }
    Ok(())
}
