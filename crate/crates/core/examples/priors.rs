//! Draws from each prior and a small-ball probability estimate.

use postrate::priors::{
    check_condition_78, small_ball_estimate, BaseShape, BernsteinDirichletPrior, FunctionNorm, HistogramPrior,
    SequencePrior, StickBreakingDP,
};
use postrate::rng::rng_from_seed;

fn main() -> postrate::Result<()> {
    let mut rng = rng_from_seed(11);

    let seq = SequencePrior::flat(10, 1.0)?;
    let theta = seq.sample(&mut rng);
    println!("sequence prior, k = 10: first coordinates {:.3?}", &theta[..3]);
    println!("  min_i sigma_i^2 i^(2 alpha) k = {:.3}", check_condition_78(&seq));

    let hist = HistogramPrior::new(8, 2.0, 3.0)?;
    let step = hist.sample(&mut rng);
    println!("histogram prior: heights {:.2?}, sup {:.2}", step.heights, step.sup_norm());

    let dp = StickBreakingDP::new(2.0, 0.0, 1.0, BaseShape::Normal)?;
    let h = dp.sample(&mut rng);
    println!("DP(2, N(0,1)): {} atoms, H(0) = {:.3}, residual {:.1e}", h.locations.len(), h.eval(0.0), h.residual);

    let bern = BernsteinDirichletPrior::geometric(20, 0.5, 0.5, 2.0)?;
    let draw = bern.sample(&mut rng)?;
    println!("Bernstein prior: order {}, {} attempts, f(0.5) = {:.3}", draw.density.order(), draw.attempts, draw.density.eval(0.5));

    // Prior mass of an L2 ball around the zero function for the histogram prior.
    let grid: Vec<f64> = (0..100).map(|i| -3.0 + 6.0 * (i as f64 + 0.5) / 100.0).collect();
    let center = vec![0.0; grid.len()];
    let tab = |rng: &mut postrate::rng::Rng| {
        let f = hist.sample(rng);
        grid.iter().map(|&x| f.eval(x)).collect::<Vec<f64>>()
    };
    for r in [1.5, 1.0, 0.75] {
        let est = small_ball_estimate(tab, &center, r, FunctionNorm::L2, 20_000, 5)?;
        println!("Pi(||f|| < {r}) = {:.4} +- {:.4}", est.estimate, est.std_error);
    }
    Ok(())
}
