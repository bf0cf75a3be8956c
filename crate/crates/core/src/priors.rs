//! Prior samplers: Gaussian sequence priors, random histograms, Dirichlet
//! process cdfs by stick-breaking, and Bernstein densities with Dirichlet
//! weights, plus a Monte Carlo estimate of prior small-ball mass.

use rand::Rng as _;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad::linspace;
use crate::rng::{rng_from_seed, Rng};
use crate::stats::{norm_cdf, norm_quantile};

/// Independent centered normal prior on the first `k` coordinates of a
/// sequence; coordinates beyond `k` are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePrior {
    pub variances: Vec<f64>,
    pub alpha: f64,
}

impl SequencePrior {
    pub fn new(variances: Vec<f64>, alpha: f64) -> Result<Self> {
        if variances.is_empty() {
            return Err(invalid("sequence prior needs k >= 1"));
        }
        if variances.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(invalid("sequence prior variances must be positive"));
        }
        if !(alpha >= 0.0) {
            return Err(invalid("smoothness must be nonnegative"));
        }
        Ok(Self { variances, alpha })
    }

    /// Variance `1/k` for every coordinate.
    pub fn flat(k: usize, alpha: f64) -> Result<Self> {
        Self::new(vec![1.0 / k as f64; k], alpha)
    }

    /// Variances `i^{-(2α+1)}`.
    pub fn power(k: usize, alpha: f64) -> Result<Self> {
        Self::new((1..=k).map(|i| (i as f64).powf(-(2.0 * alpha + 1.0))).collect(), alpha)
    }

    pub fn k(&self) -> usize {
        self.variances.len()
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        self.variances
            .iter()
            .map(|v| v.sqrt() * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }
}

pub fn sample_sequence_prior(prior: &SequencePrior, seed: u64) -> Vec<f64> {
    prior.sample(&mut rng_from_seed(seed))
}

/// `k · min_i σ²_i i^{2α}`; bounded above and below in `k` when the
/// smallest scaled variance is of order `1/k`.
pub fn check_condition_78(prior: &SequencePrior) -> f64 {
    let min = prior
        .variances
        .iter()
        .enumerate()
        .map(|(i, v)| v * ((i + 1) as f64).powf(2.0 * prior.alpha))
        .fold(f64::INFINITY, f64::min);
    prior.k() as f64 * min
}

/// Step functions on `K` equal cells of `[-A, A]` with i.i.d. uniform
/// heights on `[-M, M]`, vanishing outside `[-A, A]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramPrior {
    pub bins: usize,
    pub height_bound: f64,
    pub half_width: f64,
}

impl HistogramPrior {
    pub fn new(bins: usize, height_bound: f64, half_width: f64) -> Result<Self> {
        if bins == 0 || !(height_bound > 0.0) || !(half_width > 0.0) {
            return Err(invalid("histogram prior needs K >= 1, M > 0, A > 0"));
        }
        Ok(Self { bins, height_bound, half_width })
    }

    pub fn sample(&self, rng: &mut Rng) -> StepFunction {
        let m = self.height_bound;
        StepFunction {
            half_width: self.half_width,
            heights: (0..self.bins).map(|_| rng.random_range(-m..=m)).collect(),
        }
    }
}

/// `x ↦ α_k` on the `k`-th of equal cells partitioning `[-A, A]`, and 0
/// outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub half_width: f64,
    pub heights: Vec<f64>,
}

impl StepFunction {
    /// Cell holding `x`, or `None` outside `[-A, A]`. Cells are closed on
    /// the left; the last one also holds `A`.
    pub fn cell(&self, x: f64) -> Option<usize> {
        let a = self.half_width;
        if !(x >= -a && x <= a) {
            return None;
        }
        let k = self.heights.len();
        Some((((x + a) / (2.0 * a) * k as f64) as usize).min(k - 1))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.cell(x).map_or(0.0, |c| self.heights[c])
    }

    pub fn sup_norm(&self) -> f64 {
        self.heights.iter().fold(0.0, |m, h| m.max(h.abs()))
    }
}

pub fn sample_histogram(prior: &HistogramPrior, seed: u64) -> StepFunction {
    prior.sample(&mut rng_from_seed(seed))
}

/// Standardized shape `γ` of a Dirichlet process base measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseShape {
    Normal,
    Logistic,
    /// Uniform on `[0, 1]`.
    Uniform,
}

impl BaseShape {
    pub fn cdf(self, t: f64) -> f64 {
        match self {
            BaseShape::Normal => norm_cdf(t),
            BaseShape::Logistic => 1.0 / (1.0 + (-t).exp()),
            BaseShape::Uniform => t.clamp(0.0, 1.0),
        }
    }

    pub fn quantile(self, u: f64) -> f64 {
        match self {
            BaseShape::Normal => norm_quantile(u),
            BaseShape::Logistic => (u / (1.0 - u)).ln(),
            BaseShape::Uniform => u,
        }
    }
}

/// Dirichlet process with base cdf `γ((· − location)/scale)`, sampled by
/// truncated stick-breaking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StickBreakingDP {
    pub mass: f64,
    pub location: f64,
    pub scale: f64,
    pub shape: BaseShape,
    pub truncation: usize,
}

impl StickBreakingDP {
    /// Truncation is the larger of `⌈40·mass⌉` and the first `T` with
    /// expected leftover stick `(mass/(1+mass))^T < 1e-8`.
    pub fn new(mass: f64, location: f64, scale: f64, shape: BaseShape) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() || !(scale > 0.0) {
            return Err(invalid("DP needs positive mass and scale"));
        }
        let ratio = mass / (1.0 + mass);
        let t_resid = (1e-8f64.ln() / ratio.ln()).ceil().max(1.0) as usize;
        let truncation = t_resid.max((40.0 * mass).ceil() as usize);
        Ok(Self { mass, location, scale, shape, truncation })
    }

    pub fn base_cdf(&self, t: f64) -> f64 {
        self.shape.cdf((t - self.location) / self.scale)
    }

    pub fn sample_base(&self, rng: &mut Rng) -> f64 {
        let u: f64 = rng.random_range(f64::EPSILON..1.0);
        self.location + self.scale * self.shape.quantile(u)
    }

    pub fn sample(&self, rng: &mut Rng) -> DpCdf {
        let beta = Beta::new(1.0, self.mass).unwrap();
        let mut atoms = Vec::with_capacity(self.truncation);
        let mut left = 1.0;
        for _ in 0..self.truncation {
            let v: f64 = beta.sample(rng);
            atoms.push((self.sample_base(rng), left * v));
            left *= 1.0 - v;
        }
        DpCdf::from_atoms(atoms, left)
    }
}

/// Discrete cdf `H(t) = Σ_{x_j <= t} w_j`; the weights fall short of one
/// by `residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpCdf {
    pub locations: Vec<f64>,
    /// Running sums of the sorted atom weights.
    pub cumulative: Vec<f64>,
    pub residual: f64,
}

impl DpCdf {
    pub fn from_atoms(mut atoms: Vec<(f64, f64)>, residual: f64) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.1;
                // Rounding can carry the running sum a few ulps past one.
                acc.min(1.0)
            })
            .collect();
        Self { locations: atoms.into_iter().map(|a| a.0).collect(), cumulative, residual }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.locations.partition_point(|&x| x <= t) {
            0 => 0.0,
            j => self.cumulative[j - 1],
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

pub fn sample_dp_cdf(prior: &StickBreakingDP, seed: u64) -> DpCdf {
    prior.sample(&mut rng_from_seed(seed))
}

/// Prior `f = τ q` on spectral densities over `[0, 1]`: `q` a Bernstein
/// density of random order `k ~ ρ` with symmetric Dirichlet weights, `τ`
/// uniform, restricted to `m < f < M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinDirichletPrior {
    /// `ρ(k)` for `k = 1, 2, ...`; normalized on construction.
    pub order_pmf: Vec<f64>,
    /// Common parameter of the symmetric Dirichlet on the weights.
    pub dirichlet_weight: f64,
    pub tau_range: (f64, f64),
    pub lower: f64,
    pub upper: f64,
}

/// Grid on which the restriction `m < f < M` is checked.
pub const BERNSTEIN_CHECK_POINTS: usize = 512;
const REJECTION_BUDGET: usize = 10_000;

impl BernsteinDirichletPrior {
    pub fn new(order_pmf: Vec<f64>, dirichlet_weight: f64, tau_range: (f64, f64), lower: f64, upper: f64) -> Result<Self> {
        let total: f64 = order_pmf.iter().sum();
        if order_pmf.is_empty() || order_pmf.iter().any(|p| !(*p >= 0.0)) || !(total > 0.0) {
            return Err(invalid("order pmf must be nonnegative with positive mass"));
        }
        if !(dirichlet_weight > 0.0) {
            return Err(invalid("Dirichlet weight must be positive"));
        }
        if !(lower >= 0.0 && upper > lower) {
            return Err(invalid("need 0 <= m < M"));
        }
        if !(tau_range.0 > 0.0 && tau_range.1 >= tau_range.0) {
            return Err(invalid("tau range must be positive and ordered"));
        }
        Ok(Self {
            order_pmf: order_pmf.iter().map(|p| p / total).collect(),
            dirichlet_weight,
            tau_range,
            lower,
            upper,
        })
    }

    /// `ρ(k) ∝ e^{-β k}` on `k <= k_max`, uniform Dirichlet weights and `τ`
    /// uniform on `[1.1 m, 0.9 M]`.
    pub fn geometric(k_max: usize, beta: f64, lower: f64, upper: f64) -> Result<Self> {
        let pmf = (1..=k_max).map(|k| (-beta * k as f64).exp()).collect();
        Self::new(pmf, 1.0, (1.1 * lower.max(f64::MIN_POSITIVE), 0.9 * upper), lower, upper)
    }

    /// Whether `c⁻¹ e^{-β1 k log k} <= ρ(k) <= c e^{-β2 k}` for every `k`
    /// in the support.
    pub fn order_pmf_within(&self, beta1: f64, beta2: f64, c: f64) -> bool {
        self.order_pmf.iter().enumerate().all(|(i, &p)| {
            let k = (i + 1) as f64;
            p >= (-beta1 * k * k.ln()).exp() / c && p <= c * (-beta2 * k).exp()
        })
    }

    fn sample_unrestricted(&self, rng: &mut Rng) -> BernsteinDensity {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut k = self.order_pmf.len();
        for (i, p) in self.order_pmf.iter().enumerate() {
            acc += p;
            if u < acc {
                k = i + 1;
                break;
            }
        }
        let gamma = Gamma::new(self.dirichlet_weight, 1.0).unwrap();
        let g: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
        let s: f64 = g.iter().sum();
        let tau = if self.tau_range.1 > self.tau_range.0 {
            rng.random_range(self.tau_range.0..self.tau_range.1)
        } else {
            self.tau_range.0
        };
        BernsteinDensity { tau, weights: g.iter().map(|x| x / s).collect() }
    }

    /// Draw from the restricted prior by rejection.
    pub fn sample(&self, rng: &mut Rng) -> Result<BernsteinDraw> {
        let grid = linspace(0.0, 1.0, BERNSTEIN_CHECK_POINTS);
        for attempt in 1..=REJECTION_BUDGET {
            let d = self.sample_unrestricted(rng);
            if grid.iter().all(|&x| {
                let f = d.eval(x);
                f > self.lower && f < self.upper
            }) {
                return Ok(BernsteinDraw { density: d, attempts: attempt });
            }
        }
        Err(Error::PriorConfig(format!(
            "no draw inside ({}, {}) after {REJECTION_BUDGET} proposals (observed acceptance rate 0/{REJECTION_BUDGET})",
            self.lower, self.upper
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinDraw {
    pub density: BernsteinDensity,
    /// Proposals used, including the accepted one.
    pub attempts: usize,
}

/// `f(x) = τ Σ_{j=1}^k w_j b_{j,k}(x)` with `b_{j,k}` the Beta(j, k−j+1)
/// density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinDensity {
    pub tau: f64,
    pub weights: Vec<f64>,
}

impl BernsteinDensity {
    pub fn order(&self) -> usize {
        self.weights.len()
    }

    /// The probability density `q`.
    pub fn q(&self, x: f64) -> f64 {
        let k = self.order();
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        // b_j = k C(k−1, j−1) x^{j−1} (1−x)^{k−j}, stepped from the end
        // nearer to x so the starting term cannot underflow.
        let kf = k as f64;
        if x <= 0.5 {
            let r = x / (1.0 - x);
            let mut b = kf * (1.0 - x).powi(k as i32 - 1);
            let mut acc = 0.0;
            for (j, w) in self.weights.iter().enumerate() {
                acc += w * b;
                b *= r * (kf - 1.0 - j as f64) / (j as f64 + 1.0);
            }
            acc
        } else {
            let r = (1.0 - x) / x;
            let mut b = kf * x.powi(k as i32 - 1);
            let mut acc = 0.0;
            for (i, w) in self.weights.iter().rev().enumerate() {
                acc += w * b;
                b *= r * (kf - 1.0 - i as f64) / (i as f64 + 1.0);
            }
            acc
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.tau * self.q(x)
    }
}

pub fn sample_bernstein_density(prior: &BernsteinDirichletPrior, seed: u64) -> Result<BernsteinDraw> {
    prior.sample(&mut rng_from_seed(seed))
}

/// Norm on functions tabulated on an equispaced grid of the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionNorm {
    Sup,
    /// Root mean square over the grid.
    L2,
}

impl FunctionNorm {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let it = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            FunctionNorm::Sup => it.fold(0.0, f64::max),
            FunctionNorm::L2 => (it.map(|d| d * d).sum::<f64>() / a.len() as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallBallEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: usize,
    pub draws: usize,
    /// One-sided 95% upper confidence bound, reported when there are no
    /// hits.
    pub upper_bound: Option<f64>,
}

/// Monte Carlo estimate of `Π(‖f − f0‖ < ε)` from prior draws tabulated
/// by `sampler` and compared with the tabulated `center`.
pub fn small_ball_estimate(
    mut sampler: impl FnMut(&mut Rng) -> Vec<f64>,
    center: &[f64],
    radius: f64,
    norm: FunctionNorm,
    draws: usize,
    seed: u64,
) -> Result<SmallBallEstimate> {
    if draws < 1000 {
        return Err(invalid("small-ball estimate needs at least 1000 draws"));
    }
    let mut rng = rng_from_seed(seed);
    let hits = (0..draws)
        .filter(|_| {
            let f = sampler(&mut rng);
            norm.distance(&f, center) < radius
        })
        .count();
    let p = hits as f64 / draws as f64;
    Ok(SmallBallEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / draws as f64).sqrt(),
        hits,
        draws,
        upper_bound: (hits == 0).then(|| 1.0 - 0.05f64.powf(1.0 / draws as f64)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_ratio_examples() {
        assert!((check_condition_78(&SequencePrior::flat(7, 0.0).unwrap()) - 1.0).abs() < 1e-12);
        assert!((check_condition_78(&SequencePrior::power(25, 1.0).unwrap()) - 1.0).abs() < 1e-12);
        let ones = SequencePrior::new(vec![1.0; 10], 1.0).unwrap();
        assert!((check_condition_78(&ones) - 10.0).abs() < 1e-12);
        assert!(SequencePrior::new(vec![0.0], 0.0).is_err());
    }

    #[test]
    fn histogram_cells_and_exterior() {
        let f = StepFunction { half_width: 2.0, heights: vec![1.0, 2.0, 3.0, 4.0] };
        assert_eq!(f.eval(-2.0), 1.0);
        assert_eq!(f.eval(-0.5), 2.0);
        assert_eq!(f.eval(0.0), 3.0);
        assert_eq!(f.eval(2.0), 4.0);
        assert_eq!(f.eval(2.0001), 0.0);
        assert_eq!(f.eval(f64::NAN), 0.0);
    }

    #[test]
    fn dp_truncation_rule() {
        let dp = StickBreakingDP::new(1.0, 0.0, 1.0, BaseShape::Normal).unwrap();
        assert_eq!(dp.truncation, 40);
        let dp = StickBreakingDP::new(0.1, 0.0, 1.0, BaseShape::Normal).unwrap();
        assert!((0.1f64 / 1.1).powi(dp.truncation as i32) < 1e-8);
    }

    #[test]
    fn dp_cdf_steps() {
        let h = DpCdf::from_atoms(vec![(1.0, 0.25), (0.0, 0.5), (2.0, 0.25)], 0.0);
        assert_eq!(h.eval(-1.0), 0.0);
        assert_eq!(h.eval(0.0), 0.5);
        assert_eq!(h.eval(1.5), 0.75);
        assert_eq!(h.eval(2.0), 1.0);
    }

    #[test]
    fn bernstein_order_one_is_constant() {
        let d = BernsteinDensity { tau: 2.5, weights: vec![1.0] };
        for x in [0.0, 0.3, 1.0] {
            assert!((d.eval(x) - 2.5).abs() < 1e-15);
        }
        let p = BernsteinDirichletPrior::new(vec![1.0], 1.0, (2.5, 2.5), 2.0, 3.0).unwrap();
        assert_eq!(p.sample(&mut rng_from_seed(1)).unwrap().attempts, 1);
        let p = BernsteinDirichletPrior::new(vec![1.0], 1.0, (3.5, 3.5), 2.0, 3.0).unwrap();
        assert!(matches!(p.sample(&mut rng_from_seed(1)), Err(Error::PriorConfig(_))));
    }

    #[test]
    fn bernstein_basis_matches_beta_density() {
        // Beta(2, 3) density is 12 x (1 − x)^2.
        let d = BernsteinDensity { tau: 1.0, weights: vec![0.0, 1.0, 0.0, 0.0] };
        for x in [0.1, 0.5, 0.8] {
            assert!((d.q(x) - 12.0 * x * (1.0 - x).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_ball_edges() {
        let prior = HistogramPrior::new(3, 1.0, 1.0).unwrap();
        let center = vec![0.0; 3];
        let s = small_ball_estimate(|r| prior.sample(r).heights, &center, 1.5, FunctionNorm::Sup, 1000, 3).unwrap();
        assert_eq!(s.estimate, 1.0);
        let s = small_ball_estimate(|r| prior.sample(r).heights, &center, 0.0, FunctionNorm::Sup, 1000, 3).unwrap();
        assert_eq!(s.estimate, 0.0);
        assert!(s.upper_bound.unwrap() < 0.003);
    }
}
