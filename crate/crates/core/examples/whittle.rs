//! Exact Gaussian time-series moments from Toeplitz matrices and the
//! Whittle posterior under a Bernstein-Dirichlet prior.

use postrate::harness::ContractionModel;
use postrate::spectral::{gaussian_ts_loglik_moments, l2_distance_sq, periodogram, simulate_gaussian_ts, SpectralDensity, WhittleModel};
use std::f64::consts::PI;

fn main() -> postrate::Result<()> {
    let f = SpectralDensity::constant(1.0 / (2.0 * PI))?;
    let g = SpectralDensity::new(|l| (1.0 + 0.5 * l.cos()) / (2.0 * PI))?;
    for n in [16, 64, 256] {
        let (m, v) = gaussian_ts_loglik_moments(&f, &g, n)?;
        let scale = n as f64 * l2_distance_sq(&f, &g);
        println!("n = {n:>3}: mean {m:.4}, variance {v:.4}, ratios to n||f-g||^2 {:.3} {:.3}", m / scale, v / scale);
    }

    let x = simulate_gaussian_ts(&g, 512, 4)?;
    let p = periodogram(&x)?;
    println!("periodogram of 512 draws: {} ordinates, mean {:.4}", p.values.len(), p.values.iter().sum::<f64>() / p.values.len() as f64);

    let model = WhittleModel::default();
    for n in [64, 256, 1024] {
        let rep = model.replicate(n, 6, 20_000, 0.9, &[])?;
        println!("n = {n:>4}: radius {:.4}, ESS {:.0}", rep.radius, rep.ess.unwrap_or(f64::NAN));
    }
    Ok(())
}
