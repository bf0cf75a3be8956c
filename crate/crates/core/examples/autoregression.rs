//! Histogram prior on the regression function of a nonlinear AR(1) chain.

use postrate::markov::{contraction_radius, simulate_chain, AutoregressionExperiment};

fn main() -> postrate::Result<()> {
    let exp = AutoregressionExperiment::default();
    for n in [512, 2048, 8192] {
        let chain = simulate_chain(&exp.truth, n, exp.burn_in, 21)?;
        let prior = exp.prior(n)?;
        let r = contraction_radius(&chain, &prior, &exp.truth, 0.9, 1000, 22)?;
        println!("n = {n:>5}: {} bins on [-{:.2}, {:.2}], radius {r:.4}", prior.bins, prior.half_width, prior.half_width);
    }
    Ok(())
}
