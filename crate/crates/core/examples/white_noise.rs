//! Conjugate posterior in the Gaussian sequence model and its contraction
//! radius along a range of sample sizes.

use postrate::harness::ContractionModel;
use postrate::whitenoise::{contraction_radius, loglik_ratio_moments, simulate, Theta0, WhiteNoiseModel};

fn main() -> postrate::Result<()> {
    let model = WhiteNoiseModel::default();
    println!("{:>6} {:>4} {:>10} {:>10}", "n", "k", "eps_n", "radius");
    for n in [256, 1024, 4096, 16384] {
        let k = model.truncation(n);
        let theta0 = Theta0::power(model.alpha, 4 * k);
        let data = simulate(&theta0.values, n, theta0.k_max(), 1)?;
        let r = contraction_radius(&data, &model.prior(n)?, &theta0, 0.9, 2000, 2)?;
        println!("{n:>6} {k:>4} {:>10.4} {r:>10.4}", model.eps_n(n));
    }

    // log(p_theta0 / p_theta) under theta0 has mean n||d||^2/2 and variance n||d||^2.
    let (t0, t) = ([0.5, -0.2], [0.6, -0.1]);
    let m = loglik_ratio_moments(&t0, &t, 100, 100_000, 3);
    println!("log LR at n = 100: mean {:.4} (exact 1.0), variance {:.4} (exact 2.0)", m.mean, m.variance);
    Ok(())
}
