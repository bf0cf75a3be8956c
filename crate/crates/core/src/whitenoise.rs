//! Gaussian sequence model `X_i = θ_i + Z_i/√n` with the conjugate
//! normal sequence prior.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::harness::{ContractionModel, Replicate, TheoreticalRate};
use crate::priors::SequencePrior;
use crate::rng::{child_seed, rng_from_seed, Rng};
use crate::stats::{mean, variance, variance_std_error};

/// True parameter: explicit coordinates `1..=k_max` and the sum of squares
/// of all later ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theta0 {
    pub values: Vec<f64>,
    pub tail_sq: f64,
}

impl Theta0 {
    pub fn finite(values: Vec<f64>) -> Self {
        Self { values, tail_sq: 0.0 }
    }

    /// `θ_i = i^{-(α+1)}`, explicit up to `k_max`.
    pub fn power(alpha: f64, k_max: usize) -> Self {
        let p = alpha + 1.0;
        Self {
            values: (1..=k_max).map(|i| (i as f64).powf(-p)).collect(),
            tail_sq: power_tail(2.0 * p, k_max),
        }
    }

    pub fn k_max(&self) -> usize {
        self.values.len()
    }
}

/// `Σ_{i>m} i^{-p}` for `p > 1`: direct sum of the next thousand terms and
/// an Euler-Maclaurin remainder.
pub fn power_tail(p: f64, m: usize) -> f64 {
    const DIRECT: usize = 1000;
    let direct: f64 = (m + 1..=m + DIRECT).map(|i| (i as f64).powf(-p)).sum();
    let a = (m + DIRECT + 1) as f64;
    let rest = a.powf(1.0 - p) / (p - 1.0) + 0.5 * a.powf(-p) + p * a.powf(-p - 1.0) / 12.0
        - p * (p + 1.0) * (p + 2.0) * a.powf(-p - 3.0) / 720.0;
    direct + rest
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiteNoiseData {
    pub n: usize,
    pub x: Vec<f64>,
    pub seed: u64,
}

pub fn simulate(theta0: &[f64], n: usize, k_max: usize, seed: u64) -> Result<WhiteNoiseData> {
    if n == 0 {
        return Err(invalid("white noise needs n >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    Ok(WhiteNoiseData { n, x: draw_observation(theta0, n, k_max, &mut rng), seed })
}

fn draw_observation(theta0: &[f64], n: usize, k_max: usize, rng: &mut Rng) -> Vec<f64> {
    let s = 1.0 / (n as f64).sqrt();
    (0..k_max)
        .map(|i| theta0.get(i).copied().unwrap_or(0.0) + s * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Independent normal posterior per coordinate; coordinates past `k` are 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinatePosterior {
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
}

pub fn posterior(data: &WhiteNoiseData, prior: &SequencePrior) -> Result<CoordinatePosterior> {
    if prior.k() > data.x.len() {
        return Err(invalid(format!("prior truncation {} exceeds observed coordinates {}", prior.k(), data.x.len())));
    }
    let n = data.n as f64;
    let (means, variances) = prior
        .variances
        .iter()
        .zip(&data.x)
        .map(|(&s2, &x)| {
            let shrink = n * s2 / (1.0 + n * s2);
            (x * shrink, s2 / (1.0 + n * s2))
        })
        .unzip();
    Ok(CoordinatePosterior { means, variances })
}

/// `(K, V_{2,0})` between the `n`-fold experiments at `θ0` and `θ`:
/// `(½ n‖θ−θ0‖², n‖θ−θ0‖²)`.
pub fn kl_whitenoise(theta0: &[f64], theta: &[f64], n: usize) -> (f64, f64) {
    let d2 = sq_dist_padded(theta0, theta);
    (0.5 * n as f64 * d2, n as f64 * d2)
}

fn sq_dist_padded(a: &[f64], b: &[f64]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).powi(2))
        .sum()
}

/// `log p_{θ0}(x) − log p_θ(x) = (n/2)(‖x−θ‖² − ‖x−θ0‖²)`.
pub fn log_likelihood_ratio(theta0: &[f64], theta: &[f64], n: usize, x: &[f64]) -> f64 {
    let t = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * n as f64
        * x.iter()
            .enumerate()
            .map(|(i, &xi)| (xi - t(theta, i)).powi(2) - (xi - t(theta0, i)).powi(2))
            .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
}

impl Moments {
    pub fn of(x: &[f64]) -> Self {
        Moments {
            mean: mean(x),
            mean_se: crate::stats::std_error(x),
            variance: variance(x),
            variance_se: variance_std_error(x),
        }
    }
}

/// Monte Carlo mean and variance of the log-likelihood ratio under `θ0`.
pub fn loglik_ratio_moments(theta0: &[f64], theta: &[f64], n: usize, replicates: usize, seed: u64) -> Moments {
    let k = theta0.len().max(theta.len());
    let mut rng = rng_from_seed(seed);
    let llr: Vec<f64> = (0..replicates)
        .map(|_| log_likelihood_ratio(theta0, theta, n, &draw_observation(theta0, n, k, &mut rng)))
        .collect();
    Moments::of(&llr)
}

/// Draws of `‖θ − θ0‖` under the posterior, where coordinates past the
/// prior truncation contribute the fixed amount `Σ_{i>k} θ0_i²`.
pub fn posterior_distances(post: &CoordinatePosterior, theta0: &Theta0, draws: usize, seed: u64) -> Vec<f64> {
    let k = post.means.len();
    let fixed: f64 = theta0.values.iter().skip(k).map(|v| v * v).sum::<f64>() + theta0.tail_sq;
    let sds: Vec<f64> = post.variances.iter().map(|v| v.sqrt()).collect();
    let mut rng = rng_from_seed(seed);
    (0..draws)
        .map(|_| {
            let mut d2 = fixed;
            for i in 0..k {
                let th = post.means[i] + sds[i] * rng.sample::<f64, _>(StandardNormal);
                d2 += (th - theta0.values.get(i).copied().unwrap_or(0.0)).powi(2);
            }
            d2.sqrt()
        })
        .collect()
}

/// Posterior probability that `‖θ − θ0‖ >= r`.
pub fn posterior_mass_outside(
    data: &WhiteNoiseData,
    prior: &SequencePrior,
    theta0: &Theta0,
    r: f64,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    let post = posterior(data, prior)?;
    let d = posterior_distances(&post, theta0, draws, seed);
    Ok(d.iter().filter(|&&v| v >= r).count() as f64 / d.len() as f64)
}

/// `q`-quantile of `‖θ − θ0‖` under the posterior.
pub fn contraction_radius(
    data: &WhiteNoiseData,
    prior: &SequencePrior,
    theta0: &Theta0,
    q: f64,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(invalid("quantile must lie in (0, 1)"));
    }
    let post = posterior(data, prior)?;
    let d = posterior_distances(&post, theta0, draws, seed);
    Ok(crate::stats::quantile(&d, q))
}

/// Prior variance rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceRule {
    /// `σ²_{i,k} = 1/k`.
    Flat,
    /// `σ²_{i,k} = i^{-(2α+1)}`.
    Power,
}

/// Contraction experiment: truth `θ0_i = i^{-(α+1)}`, prior truncated at
/// `k = ⌊n^{1/(2α+1)}⌋`, `k_max = 4k` explicit coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WhiteNoiseModel {
    pub alpha: f64,
    pub variances: VarianceRule,
}

impl Default for WhiteNoiseModel {
    fn default() -> Self {
        Self { alpha: 1.0, variances: VarianceRule::Flat }
    }
}

impl WhiteNoiseModel {
    pub fn truncation(&self, n: usize) -> usize {
        // The nudge keeps exact powers such as 2^15 = 32^3 from flooring
        // one below.
        (((n as f64).powf(1.0 / (2.0 * self.alpha + 1.0)) + 1e-9).floor() as usize).max(1)
    }

    pub fn prior(&self, n: usize) -> Result<SequencePrior> {
        let k = self.truncation(n);
        match self.variances {
            VarianceRule::Flat => SequencePrior::flat(k, self.alpha),
            VarianceRule::Power => SequencePrior::power(k, self.alpha),
        }
    }
}

impl ContractionModel for WhiteNoiseModel {
    fn id(&self) -> &str {
        "white-noise"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -self.alpha / (2.0 * self.alpha + 1.0), log_power: 0.0 }
    }

    fn replicate(&self, n: usize, seed: u64, draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let prior = self.prior(n)?;
        let theta0 = Theta0::power(self.alpha, 4 * prior.k());
        let data = simulate(&theta0.values, n, theta0.k_max(), child_seed(seed, 0))?;
        let post = posterior(&data, &prior)?;
        let d = posterior_distances(&post, &theta0, draws, child_seed(seed, 1));
        Ok(Replicate::from_draws(&d, None, q, radii))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_update_example() {
        let data = WhiteNoiseData { n: 1, x: vec![1.0], seed: 0 };
        let post = posterior(&data, &SequencePrior::new(vec![1.0], 0.0).unwrap()).unwrap();
        assert!((post.means[0] - 0.5).abs() < 1e-15 && (post.variances[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kl_formula_example() {
        assert_eq!(kl_whitenoise(&[0.0, 0.0], &[0.6, 0.8], 4), (2.0, 4.0));
        assert_eq!(kl_whitenoise(&[1.0], &[1.0, 0.0], 9), (0.0, 0.0));
    }

    #[test]
    fn power_tail_matches_zeta() {
        // ζ(4) = π⁴/90.
        let z4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((power_tail(4.0, 0) - z4).abs() < 1e-14);
        let head: f64 = (1..=7).map(|i| (i as f64).powi(-4)).sum();
        assert!((power_tail(4.0, 7) - (z4 - head)).abs() < 1e-15);
    }

    #[test]
    fn truncation_on_exact_cubes() {
        let m = WhiteNoiseModel::default();
        assert_eq!(m.truncation(1 << 15), 32);
        assert_eq!(m.truncation(1 << 9), 8);
        assert_eq!(m.truncation(1000), 10);
    }

    #[test]
    fn radius_edges() {
        let data = simulate(&[0.0; 3], 10, 3, 4).unwrap();
        let prior = SequencePrior::flat(3, 0.0).unwrap();
        let th = Theta0::finite(vec![0.0; 3]);
        assert_eq!(posterior_mass_outside(&data, &prior, &th, 0.0, 1000, 1).unwrap(), 1.0);
        assert_eq!(posterior_mass_outside(&data, &prior, &th, 1e6, 1000, 1).unwrap(), 0.0);
        let r5 = contraction_radius(&data, &prior, &th, 0.5, 2000, 1).unwrap();
        let r9 = contraction_radius(&data, &prior, &th, 0.9, 2000, 1).unwrap();
        assert!(r9 > r5);
    }
}
