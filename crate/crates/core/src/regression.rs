//! Fixed-design Gaussian regression with a standard normal prior on
//! B-spline coefficients.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::harness::{ContractionModel, Replicate, TheoreticalRate};
use crate::rng::{child_seed, rng_from_seed};

/// B-splines of order `q` (degree `q − 1`) on `K` equal intervals of
/// `(0, 1]`, with `q`-fold boundary knots. Dimension `J = q + K − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineBasis {
    pub order: usize,
    pub intervals: usize,
    knots: Vec<f64>,
}

impl SplineBasis {
    pub fn new(order: usize, intervals: usize) -> Result<Self> {
        if order == 0 || intervals == 0 {
            return Err(invalid("spline basis needs q >= 1 and K >= 1"));
        }
        let mut knots = vec![0.0; order];
        knots.extend((1..intervals).map(|k| k as f64 / intervals as f64));
        knots.extend(std::iter::repeat_n(1.0, order));
        Ok(Self { order, intervals, knots })
    }

    /// Basis of order `q` with dimension `J` (needs `J >= q`).
    pub fn with_dim(order: usize, dim: usize) -> Result<Self> {
        if dim < order {
            return Err(invalid(format!("dimension {dim} is below the order {order}")));
        }
        Self::new(order, dim + 1 - order)
    }

    pub fn dim(&self) -> usize {
        self.order + self.intervals - 1
    }

    /// Index of the first nonzero basis function at `x` and the `q` values
    /// starting there. Intervals are closed on the right.
    pub fn nonzero(&self, x: f64) -> Result<(usize, Vec<f64>)> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(invalid(format!("spline argument {x} outside (0, 1]")));
        }
        let p = self.order - 1;
        let cell = ((x * self.intervals as f64).ceil() as usize).clamp(1, self.intervals) - 1;
        let s = cell + p;
        let t = &self.knots;
        let mut n = vec![0.0; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        n[0] = 1.0;
        for j in 1..=p {
            left[j] = x - t[s + 1 - j];
            right[j] = t[s + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = n[r] / (right[r + 1] + left[j - r]);
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
        }
        Ok((cell, n))
    }

    /// All `J` basis values at `x`.
    pub fn eval(&self, x: f64) -> Result<Vec<f64>> {
        let (first, vals) = self.nonzero(x)?;
        let mut out = vec![0.0; self.dim()];
        out[first..first + self.order].copy_from_slice(&vals);
        Ok(out)
    }

    /// `Σ_j β_j B_j(x)`.
    pub fn eval_function(&self, beta: &[f64], x: f64) -> Result<f64> {
        let (first, vals) = self.nonzero(x)?;
        Ok(vals.iter().enumerate().map(|(i, v)| v * beta[first + i]).sum())
    }

    /// The `n × J` matrix of basis values at the design points.
    pub fn matrix(&self, design: &[f64]) -> Result<DMatrix<f64>> {
        let mut b = DMatrix::zeros(design.len(), self.dim());
        for (i, &z) in design.iter().enumerate() {
            let (first, vals) = self.nonzero(z)?;
            for (j, v) in vals.into_iter().enumerate() {
                b[(i, first + j)] = v;
            }
        }
        Ok(b)
    }
}

pub fn bspline_basis(basis: &SplineBasis, x: f64) -> Result<Vec<f64>> {
    basis.eval(x)
}

/// `z_i = i/n`.
pub fn uniform_design(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignGram {
    /// `Σ_n = n⁻¹ Σ_i B(z_i) B(z_i)ᵀ`.
    pub matrix: DMatrix<f64>,
    pub lambda_min_j: f64,
    pub lambda_max_j: f64,
}

pub fn design_gram(basis: &SplineBasis, design: &[f64]) -> Result<DesignGram> {
    let j = basis.dim();
    if design.len() < j {
        return Err(invalid(format!("{} design points cannot identify {j} coefficients", design.len())));
    }
    let b = basis.matrix(design)?;
    let matrix = b.tr_mul(&b) / design.len() as f64;
    let eig = matrix.clone().symmetric_eigen();
    let lmin = eig.eigenvalues.min();
    let lmax = eig.eigenvalues.max();
    if lmin <= 1e-12 * lmax {
        return Err(Error::Singular(format!("design Gram matrix has smallest eigenvalue {lmin:.3e}")));
    }
    Ok(DesignGram { matrix, lambda_min_j: lmin * j as f64, lambda_max_j: lmax * j as f64 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionData {
    pub design: Vec<f64>,
    pub x: Vec<f64>,
    pub sigma: f64,
    pub seed: u64,
}

pub fn simulate(f0: impl Fn(f64) -> f64, design: &[f64], sigma: f64, seed: u64) -> Result<RegressionData> {
    if design.is_empty() || !(sigma > 0.0) {
        return Err(invalid("regression needs a nonempty design and sigma > 0"));
    }
    let mut rng = rng_from_seed(seed);
    let x = design
        .iter()
        .map(|&z| f0(z) + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(RegressionData { design: design.to_vec(), x, sigma, seed })
}

/// Gaussian posterior of the coefficients under the `N(0, I)` prior.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPosterior {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
    /// Lower Cholesky factor `L` of the precision `BᵀB/σ² + I`.
    pub precision_factor: DMatrix<f64>,
}

impl CoefficientPosterior {
    /// `mean + L^{-T} z`, which has covariance `(LLᵀ)⁻¹`.
    pub fn sample(&self, rng: &mut crate::rng::Rng) -> DVector<f64> {
        let z = DVector::from_fn(self.mean.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let w = self
            .precision_factor
            .tr_solve_upper_triangular(&z)
            .expect("Cholesky factor has a positive diagonal");
        &self.mean + w
    }
}

pub fn posterior_beta(data: &RegressionData, basis: &SplineBasis) -> Result<CoefficientPosterior> {
    let b = basis.matrix(&data.design)?;
    let s2 = data.sigma * data.sigma;
    let precision = b.tr_mul(&b) / s2 + DMatrix::identity(basis.dim(), basis.dim());
    let chol = precision
        .cholesky()
        .ok_or_else(|| Error::Singular("posterior precision is not positive definite".into()))?;
    let rhs = b.tr_mul(&DVector::from_column_slice(&data.x)) / s2;
    let mean = chol.solve(&rhs);
    Ok(CoefficientPosterior { mean, covariance: chol.inverse(), precision_factor: chol.l() })
}

/// Root mean square over the design points.
pub fn empirical_norm(values: &[f64]) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// `√J ‖f_{β1} − f_{β2}‖_n / ‖β1 − β2‖`.
pub fn spline_norm_ratio(basis: &SplineBasis, design: &[f64], beta1: &[f64], beta2: &[f64]) -> Result<f64> {
    let diff: Vec<f64> = beta1.iter().zip(beta2).map(|(a, b)| a - b).collect();
    let vals = design
        .iter()
        .map(|&z| basis.eval_function(&diff, z))
        .collect::<Result<Vec<f64>>>()?;
    let norm = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok((basis.dim() as f64).sqrt() * empirical_norm(&vals) / norm)
}

/// Sup-norm error of the least-squares spline fit to `f0` on a fine grid,
/// measured on a grid twice as fine.
pub fn spline_approx_error(f0: impl Fn(f64) -> f64, basis: &SplineBasis) -> Result<f64> {
    let m = (64 * basis.dim()).max(2000);
    let fit_grid = uniform_design(m);
    let b = basis.matrix(&fit_grid)?;
    let y = DVector::from_iterator(m, fit_grid.iter().map(|&z| f0(z)));
    let beta = b
        .svd(true, true)
        .solve(&y, 1e-13)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let check = uniform_design(2 * m);
    let mut err: f64 = 0.0;
    for z in check {
        err = err.max((basis.eval_function(beta.as_slice(), z)? - f0(z)).abs());
    }
    Ok(err)
}

/// Distance `‖f_β − f0‖_n` for posterior draws, via the projection `β*` of
/// `f0` onto the spline space: `(β−β*)ᵀΣ_n(β−β*) + ‖f_{β*} − f0‖_n²`.
pub struct DesignDistance {
    gram: DMatrix<f64>,
    projection: DVector<f64>,
    bias_sq: f64,
}

impl DesignDistance {
    pub fn new(basis: &SplineBasis, design: &[f64], f0_values: &[f64]) -> Result<Self> {
        let b = basis.matrix(design)?;
        let n = design.len() as f64;
        let gram = b.tr_mul(&b) / n;
        let y = DVector::from_column_slice(f0_values);
        let projection = b
            .clone()
            .svd(true, true)
            .solve(&y, 1e-13)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        let resid = &y - &b * &projection;
        Ok(Self { gram, projection, bias_sq: resid.norm_squared() / n })
    }

    pub fn bias(&self) -> f64 {
        self.bias_sq.sqrt()
    }

    pub fn distance(&self, beta: &DVector<f64>) -> f64 {
        let d = beta - &self.projection;
        (d.dot(&(&self.gram * &d)).max(0.0) + self.bias_sq).sqrt()
    }
}

/// Posterior draws of `‖f_β − f0‖_n`.
pub fn posterior_distances(
    data: &RegressionData,
    basis: &SplineBasis,
    f0_values: &[f64],
    draws: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let post = posterior_beta(data, basis)?;
    let dist = DesignDistance::new(basis, &data.design, f0_values)?;
    let mut rng = rng_from_seed(seed);
    Ok((0..draws).map(|_| dist.distance(&post.sample(&mut rng))).collect())
}

pub fn contraction_radius(
    data: &RegressionData,
    basis: &SplineBasis,
    f0_values: &[f64],
    q: f64,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(invalid("quantile must lie in (0, 1)"));
    }
    Ok(crate::stats::quantile(&posterior_distances(data, basis, f0_values, draws, seed)?, q))
}

pub fn posterior_mass_outside(
    data: &RegressionData,
    basis: &SplineBasis,
    f0_values: &[f64],
    r: f64,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    let d = posterior_distances(data, basis, f0_values, draws, seed)?;
    Ok(d.iter().filter(|&&v| v >= r).count() as f64 / d.len() as f64)
}

/// Regression functions available to experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegressionTruth {
    Constant { value: f64 },
    Linear,
    Sin2pi,
    /// `(x − ½)_+^α`, Hölder smooth of order `α` at the kink.
    HolderSpline { alpha: f64 },
}

impl RegressionTruth {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            RegressionTruth::Constant { value } => value,
            RegressionTruth::Linear => x,
            RegressionTruth::Sin2pi => (2.0 * std::f64::consts::PI * x).sin(),
            RegressionTruth::HolderSpline { alpha } => (x - 0.5).max(0.0).powf(alpha),
        }
    }
}

/// Contraction experiment on the uniform design with
/// `J = ⌈n^{1/(1+2α)}⌉·dim_scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplineRegressionModel {
    pub alpha: f64,
    pub order: usize,
    pub dim_scale: usize,
    pub sigma: f64,
    pub truth: RegressionTruth,
}

impl Default for SplineRegressionModel {
    fn default() -> Self {
        Self { alpha: 2.0, order: 3, dim_scale: 2, sigma: 1.0, truth: RegressionTruth::Sin2pi }
    }
}

impl SplineRegressionModel {
    pub fn basis(&self, n: usize) -> Result<SplineBasis> {
        let j = ((n as f64).powf(1.0 / (1.0 + 2.0 * self.alpha)) - 1e-9).ceil() as usize * self.dim_scale;
        SplineBasis::with_dim(self.order, j.max(self.order))
    }
}

impl ContractionModel for SplineRegressionModel {
    fn id(&self) -> &str {
        "spline-regression"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -self.alpha / (1.0 + 2.0 * self.alpha), log_power: 0.0 }
    }

    fn replicate(&self, n: usize, seed: u64, draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let basis = self.basis(n)?;
        let design = uniform_design(n);
        let truth = self.truth;
        let data = simulate(|z| truth.eval(z), &design, self.sigma, child_seed(seed, 0))?;
        let f0: Vec<f64> = design.iter().map(|&z| truth.eval(z)).collect();
        let d = posterior_distances(&data, &basis, &f0, draws, child_seed(seed, 1))?;
        Ok(Replicate::from_draws(&d, None, q, radii))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_basis() {
        let b = SplineBasis::new(1, 2).unwrap();
        assert_eq!(b.eval(0.3).unwrap(), vec![1.0, 0.0]);
        assert_eq!(b.eval(0.5).unwrap(), vec![1.0, 0.0]);
        assert_eq!(b.eval(0.7).unwrap(), vec![0.0, 1.0]);
        assert!(b.eval(0.0).is_err());
    }

    #[test]
    fn hat_functions() {
        // Order 2 on two intervals: hats centered at 0, ½, 1.
        let b = SplineBasis::new(2, 2).unwrap();
        for x in [0.1, 0.25, 0.5, 0.8, 1.0] {
            let hat = |c: f64| (1.0 - (x - c).abs() * 2.0).max(0.0);
            let v = b.eval(x).unwrap();
            for (j, c) in [0.0, 0.5, 1.0].into_iter().enumerate() {
                assert!((v[j] - hat(c)).abs() < 1e-15, "x {x} j {j}");
            }
        }
    }

    #[test]
    fn piecewise_constant_gram_is_diagonal() {
        let b = SplineBasis::new(1, 4).unwrap();
        let design = [0.1, 0.2, 0.3, 0.6, 0.9, 0.95];
        let g = design_gram(&b, &design).unwrap();
        let freq = [2.0, 1.0, 1.0, 2.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { freq[i] / 6.0 } else { 0.0 };
                assert!((g.matrix[(i, j)] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn representable_functions_fit_exactly() {
        let b = SplineBasis::new(3, 5).unwrap();
        assert!(spline_approx_error(|_| 2.0, &b).unwrap() < 1e-10);
        assert!(spline_approx_error(|x| x, &b).unwrap() < 1e-10);
    }

    #[test]
    fn zero_response_zero_mean() {
        let b = SplineBasis::new(3, 4).unwrap();
        let data = RegressionData { design: uniform_design(20), x: vec![0.0; 20], sigma: 1.0, seed: 0 };
        let post = posterior_beta(&data, &b).unwrap();
        assert!(post.mean.amax() < 1e-15);
    }
}
