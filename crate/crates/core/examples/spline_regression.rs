//! Gaussian regression on B-splines with a flat-covariance conjugate prior.

use postrate::regression::{
    contraction_radius, simulate, spline_approx_error, uniform_design, SplineBasis, SplineRegressionModel,
};

fn main() -> postrate::Result<()> {
    let f0 = |x: f64| (2.0 * std::f64::consts::PI * x).sin();

    let basis = SplineBasis::new(3, 8)?;
    let row = basis.eval(0.3)?;
    println!("order 3, 8 intervals: {} functions, sum at 0.3 = {:.15}", basis.dim(), row.iter().sum::<f64>());
    for j in [8, 16, 32, 64] {
        println!("approximation error, J = {j}: {:.3e}", spline_approx_error(f0, &SplineBasis::new(3, j)?)?);
    }

    let model = SplineRegressionModel::default();
    for n in [512, 2048, 8192] {
        let design = uniform_design(n);
        let data = simulate(f0, &design, model.sigma, 7)?;
        let basis = model.basis(n)?;
        let f0_values: Vec<f64> = design.iter().map(|&x| f0(x)).collect();
        let r = contraction_radius(&data, &basis, &f0_values, 0.9, 1000, 8)?;
        println!("n = {n:>5}, J = {:>3}: radius {r:.4}", basis.dim());
    }
    Ok(())
}
