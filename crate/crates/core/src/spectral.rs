//! Stationary Gaussian time series indexed by their spectral density:
//! exact Toeplitz likelihoods, the periodogram, the Whittle likelihood and
//! an importance-sampled Whittle posterior under a Bernstein prior.
//!
//! Densities live on `(−π, π]` and are even. The Whittle side works on the
//! unit interval through `x = |λ|/π`, where the periodogram ordinates are
//! `x_j = 2j/n`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::divergences::{hellinger_sq, Density};
use crate::error::{invalid, Error, Result};
use crate::harness::{ContractionModel, Replicate, TheoreticalRate};
use crate::inid::ImportanceSample;
use crate::priors::{BernsteinDensity, BernsteinDirichletPrior};
use crate::rng::{child_seed, rng_from_seed, Rng};
use crate::stats::{effective_sample_size, softmax};

/// Intervals of the tabulation of `[0, π]`.
pub const TABLE_INTERVALS: usize = 1024;
/// Largest lag served from the tabulation.
pub const MAX_TABLE_LAG: usize = TABLE_INTERVALS / 4;
/// Longest series [`simulate_gaussian_ts`] accepts.
pub const MAX_SIMULATION_LENGTH: usize = 8192;
/// Longest series for dense Toeplitz algebra.
pub const MAX_DENSE_LENGTH: usize = 256;

/// An even spectral density on `(−π, π]`, tabulated at `kπ/1024`.
#[derive(Clone)]
pub struct SpectralDensity {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `f(kπ/1024)` for `k = 0..=1024`.
    pub table: Vec<f64>,
    /// Smallest tabulated value.
    pub lower: f64,
    /// Largest tabulated value.
    pub upper: f64,
    /// `max |log f|` over the table, infinite when `f` touches zero.
    pub log_bound: f64,
}

impl fmt::Debug for SpectralDensity {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("SpectralDensity")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("log_bound", &self.log_bound)
            .finish_non_exhaustive()
    }
}

impl SpectralDensity {
    /// From `f` on `[0, π]`; negative frequencies use `f(|λ|)`.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let table: Vec<f64> = (0..=TABLE_INTERVALS)
            .map(|k| f(k as f64 * std::f64::consts::PI / TABLE_INTERVALS as f64))
            .collect();
        if table.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || table.iter().all(|v| *v == 0.0) {
            return Err(invalid("spectral density must be nonnegative, finite and not identically zero"));
        }
        let lower = table.iter().cloned().fold(f64::INFINITY, f64::min);
        let upper = table.iter().cloned().fold(0.0, f64::max);
        Ok(Self { f: Arc::new(f), table, lower, upper, log_bound: lower.ln().abs().max(upper.ln().abs()) })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(move |_| c)
    }

    /// From `g` on the unit interval, `f(λ) = g(|λ|/π)`.
    pub fn from_unit(g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::new(move |l| g(to_unit(l)))
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        (self.f)(lambda.abs())
    }

    pub fn eval_unit(&self, x: f64) -> f64 {
        (self.f)(from_unit(x))
    }

    /// `γ_h = ∫ e^{ihλ} f(λ) dλ` by the trapezoid rule on the table, which
    /// is exact for trigonometric polynomials of degree below 2048 − |h|.
    pub fn autocovariance(&self, h: i64) -> Result<f64> {
        let h = h.unsigned_abs() as usize;
        if h > MAX_TABLE_LAG {
            return Err(invalid(format!("lag {h} exceeds the aliasing limit {MAX_TABLE_LAG}")));
        }
        Ok(trapezoid_cosine(&self.table, h + 1)[h])
    }

    /// `γ_0, ..., γ_{lags−1}`, on a finer grid when the table is too coarse.
    pub fn autocovariances(&self, lags: usize) -> Vec<f64> {
        if lags <= MAX_TABLE_LAG + 1 {
            return trapezoid_cosine(&self.table, lags);
        }
        let m = 4 * lags;
        let grid: Vec<f64> = (0..=m).map(|k| (self.f)(k as f64 * std::f64::consts::PI / m as f64)).collect();
        trapezoid_cosine(&grid, lags)
    }
}

/// `2∫_0^π cos(hλ) f(λ) dλ` for `h < lags`, from `f` at `kπ/m`.
fn trapezoid_cosine(values: &[f64], lags: usize) -> Vec<f64> {
    let m = values.len() - 1;
    let cos: Vec<f64> = (0..2 * m).map(|j| (std::f64::consts::PI * j as f64 / m as f64).cos()).collect();
    let step = std::f64::consts::PI / m as f64;
    (0..lags)
        .map(|h| {
            let mut s = 0.5 * (values[0] + values[m] * cos[(h * m) % (2 * m)]);
            for (k, v) in values.iter().enumerate().take(m).skip(1) {
                s += v * cos[(h * k) % (2 * m)];
            }
            2.0 * step * s
        })
        .collect()
}

/// `λ ↦ |λ|/π`.
pub fn to_unit(lambda: f64) -> f64 {
    lambda.abs() / std::f64::consts::PI
}

/// `x ↦ πx`.
pub fn from_unit(x: f64) -> f64 {
    std::f64::consts::PI * x
}

/// `∫_{−π}^{π} (f − g)²` by the trapezoid rule on the tables.
pub fn l2_distance_sq(f: &SpectralDensity, g: &SpectralDensity) -> f64 {
    let d: Vec<f64> = f.table.iter().zip(&g.table).map(|(a, b)| (a - b).powi(2)).collect();
    let m = d.len() - 1;
    let inner: f64 = d[1..m].iter().sum::<f64>() + 0.5 * (d[0] + d[m]);
    2.0 * std::f64::consts::PI / m as f64 * inner
}

/// Covariance matrix `T_n(f)` of `n` consecutive observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzMatrix {
    /// `γ_0, ..., γ_{n−1}`.
    pub first_row: Vec<f64>,
}

impl ToeplitzMatrix {
    pub fn new(f: &SpectralDensity, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_LENGTH + 1 {
            return Err(invalid(format!("dense Toeplitz matrices need 1 <= n <= {}", MAX_DENSE_LENGTH + 1)));
        }
        Ok(Self { first_row: f.autocovariances(n) })
    }

    pub fn n(&self) -> usize {
        self.first_row.len()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.first_row[i.abs_diff(j)])
    }

    /// `Σ_{|h|<n} (n − |h|) γ_h²`.
    pub fn frobenius_sq(&self) -> f64 {
        let n = self.n();
        self.first_row
            .iter()
            .enumerate()
            .map(|(h, g)| if h == 0 { n as f64 * g * g } else { 2.0 * (n - h) as f64 * g * g })
            .sum()
    }

    pub fn cholesky(&self) -> Result<Cholesky<f64, Dyn>> {
        Cholesky::new(self.dense()).ok_or_else(|| Error::Singular("Toeplitz matrix is not positive definite".into()))
    }
}

fn log_det(c: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * c.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
}

/// `log p_f(x) − log p_g(x)` for Gaussian series with covariances
/// `T_n(f)` and `T_n(g)`.
pub struct GaussianLikelihoodRatio {
    chol_f: Cholesky<f64, Dyn>,
    chol_g: Cholesky<f64, Dyn>,
    offset: f64,
}

impl GaussianLikelihoodRatio {
    pub fn new(f: &SpectralDensity, g: &SpectralDensity, n: usize) -> Result<Self> {
        let chol_f = ToeplitzMatrix::new(f, n)?.cholesky()?;
        let chol_g = ToeplitzMatrix::new(g, n)?.cholesky()?;
        let offset = 0.5 * (log_det(&chol_g) - log_det(&chol_f));
        Ok(Self { chol_f, chol_g, offset })
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        self.offset - 0.5 * x.dot(&self.chol_f.solve(x)) + 0.5 * x.dot(&self.chol_g.solve(x))
    }

    /// Exact draw of the series under `f`.
    pub fn sample_under_f(&self, rng: &mut Rng) -> DVector<f64> {
        let n = self.chol_f.l_dirty().nrows();
        let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        self.chol_f.l() * z
    }
}

/// Mean and variance of `log(p_f/p_g)` over `n` observations under `f`:
/// with `A = T_n(g)^{-1} T_n(f)`, the mean is
/// `½(log det T_n(g) − log det T_n(f) + tr A − n)` and the variance is
/// `½ tr((A − I)²)`.
pub fn gaussian_ts_loglik_moments(f: &SpectralDensity, g: &SpectralDensity, n: usize) -> Result<(f64, f64)> {
    if n > MAX_DENSE_LENGTH {
        return Err(invalid(format!("exact moments need n <= {MAX_DENSE_LENGTH}")));
    }
    let tf = ToeplitzMatrix::new(f, n)?;
    let cf = tf.cholesky()?;
    let cg = ToeplitzMatrix::new(g, n)?.cholesky()?;
    let mut a = cg.solve(&tf.dense());
    let mean = 0.5 * (log_det(&cg) - log_det(&cf) + a.trace() - n as f64);
    for i in 0..n {
        a[(i, i)] -= 1.0;
    }
    let var = 0.5 * a.component_mul(&a.transpose()).sum();
    Ok((mean.max(0.0), var))
}

/// `max(mean, variance)/(n‖f − g‖²)` over the pairs: the smallest constant
/// for which both moments are bounded by `C n ‖f − g‖²` on the set.
pub fn moment_constant(pairs: &[(SpectralDensity, SpectralDensity)], n: usize) -> Result<f64> {
    let mut c: f64 = 0.0;
    for (f, g) in pairs {
        let (m, v) = gaussian_ts_loglik_moments(f, g, n)?;
        c = c.max(m.max(v) / (n as f64 * l2_distance_sq(f, g)));
    }
    Ok(c)
}

/// Exact Gaussian log-likelihood of a series under `T_n(f)`.
pub fn exact_gaussian_loglik(f: &SpectralDensity, x: &[f64]) -> Result<f64> {
    let c = ToeplitzMatrix::new(f, x.len())?.cholesky()?;
    let v = DVector::from_column_slice(x);
    Ok(-0.5 * (x.len() as f64 * (2.0 * std::f64::consts::PI).ln() + log_det(&c) + v.dot(&c.solve(&v))))
}

/// `I_n(x) = (2πn)^{-1} |Σ_t X_t e^{−itπx}|²` at `x_j = 2j/n`,
/// `j = 1..⌊n/2⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    pub n: usize,
    pub ordinates: Vec<f64>,
    pub values: Vec<f64>,
}

impl Periodogram {
    pub fn nu(&self) -> usize {
        self.values.len()
    }
}

pub fn periodogram(x: &[f64]) -> Result<Periodogram> {
    let n = x.len();
    if n < 4 {
        return Err(invalid("periodogram needs at least 4 observations"));
    }
    let nu = n / 2;
    let cos: Vec<f64> = (0..n).map(|k| (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
    let sin: Vec<f64> = (0..n).map(|k| (2.0 * std::f64::consts::PI * k as f64 / n as f64).sin()).collect();
    let values = (1..=nu)
        .map(|j| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in x.iter().enumerate() {
                let k = (j * (t + 1)) % n;
                re += v * cos[k];
                im -= v * sin[k];
            }
            (re * re + im * im) / (2.0 * std::f64::consts::PI * n as f64)
        })
        .collect();
    Ok(Periodogram { n, ordinates: (1..=nu).map(|j| 2.0 * j as f64 / n as f64).collect(), values })
}

/// `I_n` at one point `x` of the unit scale.
pub fn periodogram_at(x: &[f64], at: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (t, v) in x.iter().enumerate() {
        let (s, c) = (std::f64::consts::PI * at * (t + 1) as f64).sin_cos();
        re += v * c;
        im -= v * s;
    }
    (re * re + im * im) / (2.0 * std::f64::consts::PI * x.len() as f64)
}

/// `Σ_j −log f(x_j) − I_n(x_j)/f(x_j)` with `f` on the unit scale.
pub fn whittle_loglik(f: impl Fn(f64) -> f64, p: &Periodogram) -> Result<f64> {
    let mut s = 0.0;
    for (&x, &i) in p.ordinates.iter().zip(&p.values) {
        let v = f(x);
        if !(v > 0.0) {
            return Err(invalid(format!("spectral density must be positive, got {v} at {x}")));
        }
        s -= v.ln() + i / v;
    }
    Ok(s)
}

fn ordinates(n: usize) -> impl Iterator<Item = f64> {
    (1..=n / 2).map(move |j| 2.0 * j as f64 / n as f64)
}

/// `(ν^{-1} Σ_i (f1(x_i) − f2(x_i))²)^{1/2}` over the ordinates of a
/// series of length `n`, with both densities on the unit scale.
pub fn dbar_distance(f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64, n: usize) -> f64 {
    let nu = (n / 2).max(1) as f64;
    (ordinates(n).map(|x| (f1(x) - f2(x)).powi(2)).sum::<f64>() / nu).sqrt()
}

/// `d_n` of the Whittle experiment: root mean squared Hellinger distance
/// between the exponential laws with means `f1(x_i)` and `f2(x_i)`.
pub fn whittle_hellinger(f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    let nu = (n / 2).max(1) as f64;
    let mut s = 0.0;
    for x in ordinates(n) {
        s += hellinger_sq(&Density::exponential(f1(x))?, &Density::exponential(f2(x))?)?;
    }
    Ok((s / nu).sqrt())
}

/// Exact draw of `n` observations of the zero-mean Gaussian series with
/// density `f`, by the Durbin-Levinson recursion on its autocovariances.
pub fn simulate_gaussian_ts(f: &SpectralDensity, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n > MAX_SIMULATION_LENGTH {
        return Err(invalid(format!("series length is limited to {MAX_SIMULATION_LENGTH}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let gamma = f.autocovariances(n);
    let mut rng = rng_from_seed(seed);
    let mut x = Vec::with_capacity(n);
    let mut phi: Vec<f64> = Vec::new();
    let mut v = gamma[0];
    for t in 0..n {
        if !(v > 0.0) {
            return Err(Error::Singular(format!("innovation variance {v} at step {t}")));
        }
        let pred: f64 = phi.iter().enumerate().map(|(j, p)| p * x[t - 1 - j]).sum();
        let z: f64 = rng.sample(StandardNormal);
        x.push(pred + v.sqrt() * z);
        if t + 1 < n {
            let k = t + 1;
            let num = gamma[k] - phi.iter().enumerate().map(|(j, p)| p * gamma[k - 1 - j]).sum::<f64>();
            let a = num / v;
            let mut next: Vec<f64> = phi.iter().enumerate().map(|(j, p)| p - a * phi[k - 2 - j]).collect();
            next.push(a);
            phi = next;
            v *= 1.0 - a * a;
        }
    }
    Ok(x)
}

/// Importance sample of the Whittle posterior from `draws` prior draws,
/// keeping `map(f)` per draw. An empty series returns the prior.
pub fn whittle_posterior_is<T>(
    series: &[f64],
    prior: &BernsteinDirichletPrior,
    draws: usize,
    seed: u64,
    map: impl Fn(&BernsteinDensity) -> T,
) -> Result<ImportanceSample<T>> {
    if draws < 10_000 {
        return Err(invalid("importance sampling needs at least 10^4 prior draws"));
    }
    let p = if series.is_empty() {
        Periodogram { n: 0, ordinates: Vec::new(), values: Vec::new() }
    } else {
        periodogram(series)?
    };
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(draws);
    let mut logw = Vec::with_capacity(draws);
    for _ in 0..draws {
        let d = prior.sample(&mut rng)?.density;
        logw.push(whittle_loglik(|x| d.eval(x), &p)?);
        values.push(map(&d));
    }
    let weights = softmax(&logw);
    let ess = effective_sample_size(&weights);
    Ok(ImportanceSample { values, weights, ess })
}

/// Reads a single-column CSV with header `x`.
pub fn read_series_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    #[derive(Deserialize)]
    struct Row {
        x: f64,
    }
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize::<Row>().map(|row| Ok(row?.x)).collect()
}

/// Whittle posterior for a Gaussian series with density `truth` on the unit
/// scale, under the Bernstein prior with orders capped at
/// `⌈order_cap·n^{1/3}(log n)^{2/3}⌉` and `ρ(k) ∝ e^{−order_decay·k}`.
/// Distances are `d̄_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WhittleModel {
    pub truth: BernsteinDensity,
    pub lower: f64,
    pub upper: f64,
    pub order_decay: f64,
    pub order_cap: f64,
    pub dirichlet_weight: f64,
}

impl Default for WhittleModel {
    fn default() -> Self {
        Self {
            truth: BernsteinDensity { tau: 1.0, weights: vec![1.0] },
            lower: 0.5,
            upper: 2.0,
            order_decay: 1.0,
            order_cap: 1.0,
            dirichlet_weight: 1.0,
        }
    }
}

impl WhittleModel {
    pub fn prior(&self, n: usize) -> Result<BernsteinDirichletPrior> {
        let ln = (n.max(2) as f64).ln();
        let k_max = (self.order_cap * (n as f64).cbrt() * ln.powf(2.0 / 3.0)).ceil().max(1.0) as usize;
        let mut p = BernsteinDirichletPrior::geometric(k_max, self.order_decay, self.lower, self.upper)?;
        p.dirichlet_weight = self.dirichlet_weight;
        Ok(p)
    }

    pub fn truth_density(&self) -> Result<SpectralDensity> {
        let t = self.truth.clone();
        SpectralDensity::from_unit(move |x| t.eval(x))
    }
}

impl ContractionModel for WhittleModel {
    fn id(&self) -> &str {
        "whittle"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -1.0 / 3.0, log_power: 1.0 / 3.0 }
    }

    fn replicate(&self, n: usize, seed: u64, draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let x = simulate_gaussian_ts(&self.truth_density()?, n, child_seed(seed, 0))?;
        let is = whittle_posterior_is(&x, &self.prior(n)?, draws, child_seed(seed, 1), |d| {
            dbar_distance(|v| d.eval(v), |v| self.truth.eval(v), n)
        })?;
        Ok(Replicate::from_draws(&is.values, Some(&is.weights), q, radii))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn white_noise_autocovariances() {
        let f = SpectralDensity::constant(1.0 / (2.0 * PI)).unwrap();
        assert!((f.autocovariance(0).unwrap() - 1.0).abs() < 1e-14);
        assert!(f.autocovariance(7).unwrap().abs() < 1e-14);
        assert!(f.autocovariance(257).is_err());
        let g = SpectralDensity::new(|l| (1.0 + l.cos()) / (2.0 * PI)).unwrap();
        assert!((g.autocovariance(1).unwrap() - 0.5).abs() < 1e-14);
        assert!((g.autocovariance(-1).unwrap() - 0.5).abs() < 1e-14);
        let long = g.autocovariances(600);
        assert!((long[1] - 0.5).abs() < 1e-14 && long[599].abs() < 1e-14);
    }

    #[test]
    fn frobenius_identity() {
        let f = SpectralDensity::new(|l| 1.0 + 0.5 * l.cos() + 0.2 * (3.0 * l).cos()).unwrap();
        let t = ToeplitzMatrix::new(&f, 12).unwrap();
        assert!((t.dense().norm_squared() - t.frobenius_sq()).abs() < 1e-8);
    }

    #[test]
    fn white_noise_moments_closed_form() {
        let f = SpectralDensity::constant(1.0 / (2.0 * PI)).unwrap();
        let g = SpectralDensity::constant(1.0 / PI).unwrap();
        let (m, v) = gaussian_ts_loglik_moments(&f, &g, 8).unwrap();
        // T_f = I, T_g = 2I.
        assert!((m - 4.0 * (2f64.ln() - 0.5)).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(gaussian_ts_loglik_moments(&f, &f, 8).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn periodogram_parseval_and_peak() {
        let x: Vec<f64> = (0..16).map(|t| (t as f64 * 0.7).sin() + 0.1 * t as f64).collect();
        let total: f64 = (0..16).map(|j| periodogram_at(&x, 2.0 * j as f64 / 16.0)).sum();
        assert!((total - x.iter().map(|v| v * v).sum::<f64>() / (2.0 * PI)).abs() < 1e-10);
        let p = periodogram(&x).unwrap();
        for (o, v) in p.ordinates.iter().zip(&p.values) {
            assert!((periodogram_at(&x, *o) - v).abs() < 1e-10);
        }
        let c: Vec<f64> = (1..=32).map(|t| (PI * 6.0 / 32.0 * t as f64).cos()).collect();
        let p = periodogram(&c).unwrap();
        let peak = p.values.iter().enumerate().fold(0, |b, (i, v)| if *v > p.values[b] { i } else { b });
        assert_eq!(peak + 1, 3);
    }

    #[test]
    fn whittle_scaling() {
        let x: Vec<f64> = (0..20).map(|t| ((t * t) as f64 * 0.31).cos()).collect();
        let p = periodogram(&x).unwrap();
        let base = whittle_loglik(|_| 1.0, &p).unwrap();
        let c = 1.7;
        let sum_i: f64 = p.values.iter().sum();
        let scaled = whittle_loglik(|_| c, &p).unwrap();
        assert!((scaled - base - (-(p.nu() as f64) * c.ln() - (1.0 / c - 1.0) * sum_i)).abs() < 1e-12);
        let mean = sum_i / p.nu() as f64;
        let best = whittle_loglik(|_| mean, &p).unwrap();
        assert!(best >= whittle_loglik(|_| mean * 1.01, &p).unwrap());
        assert!(best >= whittle_loglik(|_| mean * 0.99, &p).unwrap());
    }

    #[test]
    fn dbar_constants() {
        assert!((dbar_distance(|_| 1.2, |_| 0.7, 64) - 0.5).abs() < 1e-15);
        assert_eq!(dbar_distance(|x| x, |x| x, 64), 0.0);
    }

    #[test]
    fn durbin_levinson_is_reproducible() {
        let f = SpectralDensity::new(|l| (1.0 + 0.8 * l.cos()) / (2.0 * PI)).unwrap();
        assert_eq!(simulate_gaussian_ts(&f, 50, 3).unwrap(), simulate_gaussian_ts(&f, 50, 3).unwrap());
        assert!(simulate_gaussian_ts(&f, 8193, 3).is_err());
    }
}
