//! Nonlinear autoregression `X_i = f(X_{i−1}) + ε_i` with standard normal
//! innovations and a random-histogram prior on `f`.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::harness::{ContractionModel, Replicate, TheoreticalRate};
use crate::priors::{HistogramPrior, StepFunction};
use crate::quad::simpson_piecewise;
use crate::rng::{child_seed, rng_from_seed, Rng};
use crate::stats::{norm_cdf, norm_pdf, norm_quantile, norm_sf};
use crate::whitenoise::Moments;

/// Regression functions available to experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegressionFn {
    Zero,
    Constant { value: f64 },
    /// `amplitude · tanh(x)`.
    TanhScaled { amplitude: f64 },
    Histogram(StepFunction),
}

impl RegressionFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RegressionFn::Zero => 0.0,
            RegressionFn::Constant { value } => *value,
            RegressionFn::TanhScaled { amplitude } => amplitude * x.tanh(),
            RegressionFn::Histogram(h) => h.eval(x),
        }
    }

    /// Points where the function jumps.
    pub fn breaks(&self) -> Vec<f64> {
        match self {
            RegressionFn::Histogram(h) => {
                let k = h.heights.len();
                (0..=k).map(|i| -h.half_width + 2.0 * h.half_width * i as f64 / k as f64).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Envelope `r(y) = ½(φ(y − M) + φ(y + M))` of the transition densities.
pub fn envelope(y: f64, m: f64) -> f64 {
    0.5 * (norm_pdf(y - m) + norm_pdf(y + m))
}

/// `∫_a^b r` in closed form.
pub fn envelope_mass(a: f64, b: f64, m: f64) -> f64 {
    let cdf = |y: f64| 0.5 * (norm_cdf(y - m) + norm_cdf(y + m));
    cdf(b) - cdf(a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoregressionModel {
    pub f: RegressionFn,
    pub height_bound: f64,
    pub lipschitz: f64,
}

impl AutoregressionModel {
    /// Checks `sup|f| <= M` and the Lipschitz bound on a grid over
    /// `[-M − 8, M + 8]`. Histograms are exempt from the Lipschitz check.
    pub fn new(f: RegressionFn, height_bound: f64, lipschitz: f64) -> Result<Self> {
        let span = height_bound + 8.0;
        let grid: Vec<f64> = (0..=4000).map(|i| -span + 2.0 * span * i as f64 / 4000.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&x| f.eval(x)).collect();
        if vals.iter().any(|v| v.abs() > height_bound) {
            return Err(invalid("regression function exceeds the height bound"));
        }
        if !matches!(f, RegressionFn::Histogram(_)) {
            let h = grid[1] - grid[0];
            let lip = vals.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max);
            if lip > lipschitz * (1.0 + 1e-6) {
                return Err(invalid(format!("empirical Lipschitz constant {lip} exceeds {lipschitz}")));
            }
        }
        Ok(Self { f, height_bound, lipschitz })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainData {
    /// `X_0, ..., X_n`.
    pub states: Vec<f64>,
    pub burn_in: usize,
    pub seed: u64,
}

impl ChainData {
    pub fn n(&self) -> usize {
        self.states.len() - 1
    }
}

fn run_chain(f: &RegressionFn, n: usize, burn_in: usize, rng: &mut Rng) -> Vec<f64> {
    let mut x = 0.0;
    for _ in 0..burn_in {
        x = f.eval(x) + rng.sample::<f64, _>(StandardNormal);
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(x);
    for _ in 0..n {
        x = f.eval(x) + rng.sample::<f64, _>(StandardNormal);
        states.push(x);
    }
    states
}

/// Chain of length `n + 1` started at 0 and run `burn_in` steps first.
pub fn simulate_chain(f: &RegressionFn, n: usize, burn_in: usize, seed: u64) -> Result<ChainData> {
    if burn_in < 1000 {
        return Err(invalid("burn-in must be at least 1000 steps"));
    }
    Ok(ChainData { states: run_chain(f, n, burn_in, &mut rng_from_seed(seed)), burn_in, seed })
}

fn integration_breaks(f1: &RegressionFn, f2: &RegressionFn) -> Vec<f64> {
    let mut b = f1.breaks();
    b.extend(f2.breaks());
    b
}

/// `d²(f1, f2) = ∫ 2(1 − e^{−(f1−f2)²/8}) r`, the squared Hellinger
/// distance between transition densities integrated against `r`.
pub fn transition_distance_sq(f1: &RegressionFn, f2: &RegressionFn, m: f64) -> f64 {
    let g = |x: f64| 2.0 * (1.0 - (-(f1.eval(x) - f2.eval(x)).powi(2) / 8.0).exp()) * envelope(x, m);
    let lim = m + 12.0;
    simpson_piecewise(g, -lim, lim, &integration_breaks(f1, f2), 1e-3, 8)
}

pub fn transition_distance(f1: &RegressionFn, f2: &RegressionFn, m: f64) -> f64 {
    transition_distance_sq(f1, f2, m).sqrt()
}

/// `‖f1 − f2‖` in `L2(r)`.
pub fn l2_envelope(f1: &RegressionFn, f2: &RegressionFn, m: f64) -> f64 {
    let g = |x: f64| (f1.eval(x) - f2.eval(x)).powi(2) * envelope(x, m);
    let lim = m + 12.0;
    simpson_piecewise(g, -lim, lim, &integration_breaks(f1, f2), 1e-3, 8).sqrt()
}

/// `N(mean, sd²)` restricted to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedNormal {
    pub mean: f64,
    pub sd: f64,
    pub lo: f64,
    pub hi: f64,
}

impl TruncatedNormal {
    fn std_bounds(&self) -> (f64, f64) {
        ((self.lo - self.mean) / self.sd, (self.hi - self.mean) / self.sd)
    }

    /// Inverse-cdf draw, working in whichever tail keeps the interval's
    /// probability representable.
    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let (a, b) = self.std_bounds();
        let u: f64 = rng.random();
        let z = if a >= 0.0 {
            let (pa, pb) = (norm_sf(a), norm_sf(b));
            if pa - pb > 1e-300 {
                -norm_quantile(pb + u * (pa - pb))
            } else {
                exponential_tail(a, b, u)
            }
        } else if b <= 0.0 {
            let (pa, pb) = (norm_cdf(a), norm_cdf(b));
            if pb - pa > 1e-300 {
                norm_quantile(pa + u * (pb - pa))
            } else {
                -exponential_tail(-b, -a, u)
            }
        } else {
            let (pa, pb) = (norm_cdf(a), norm_cdf(b));
            norm_quantile(pa + u * (pb - pa))
        };
        (self.mean + self.sd * z.clamp(a, b)).clamp(self.lo, self.hi)
    }

    pub fn mass(&self) -> f64 {
        let (a, b) = self.std_bounds();
        if a >= 0.0 {
            norm_sf(a) - norm_sf(b)
        } else {
            norm_cdf(b) - norm_cdf(a)
        }
    }

    pub fn expectation(&self) -> f64 {
        let (a, b) = self.std_bounds();
        let z = self.mass();
        if z > 1e-300 {
            self.mean + self.sd * (norm_pdf(a) - norm_pdf(b)) / z
        } else if a >= 0.0 {
            self.lo
        } else {
            self.hi
        }
    }
}

/// Draw from the standard normal restricted to `[a, b]`, `a` far in the
/// upper tail, using the exponential approximation of the density there.
fn exponential_tail(a: f64, b: f64, u: f64) -> f64 {
    let span = 1.0 - (-a * (b - a)).exp();
    a - (1.0 - u * span).ln() / a
}

/// Per-bin posterior: bin `k` with `m_k` visits and response sum `s_k` has
/// density proportional to `1{|α| <= M} φ(√m_k (α − s_k/m_k))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramPosterior {
    pub prior: HistogramPrior,
    pub visits: Vec<usize>,
    pub sums: Vec<f64>,
}

impl HistogramPosterior {
    /// Posterior law of bin `k`: truncated normal, or `None` for the
    /// uniform prior when the bin was never visited.
    pub fn bin_law(&self, k: usize) -> Option<TruncatedNormal> {
        let m = self.visits[k];
        (m > 0).then(|| {
            let mf = m as f64;
            TruncatedNormal {
                mean: self.sums[k] / mf,
                sd: 1.0 / mf.sqrt(),
                lo: -self.prior.height_bound,
                hi: self.prior.height_bound,
            }
        })
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let mb = self.prior.height_bound;
        (0..self.visits.len())
            .map(|k| match self.bin_law(k) {
                Some(t) => t.sample(rng),
                None => rng.random_range(-mb..=mb),
            })
            .collect()
    }

    pub fn means(&self) -> Vec<f64> {
        (0..self.visits.len()).map(|k| self.bin_law(k).map_or(0.0, |t| t.expectation())).collect()
    }
}

/// Factorized posterior under the transition likelihood conditional on
/// `X_0`. Transitions from outside `[-A, A]` carry no information.
pub fn histogram_posterior(data: &ChainData, prior: &HistogramPrior) -> HistogramPosterior {
    let cells = StepFunction { half_width: prior.half_width, heights: vec![0.0; prior.bins] };
    let mut visits = vec![0usize; prior.bins];
    let mut sums = vec![0.0; prior.bins];
    for w in data.states.windows(2) {
        if let Some(c) = cells.cell(w[0]) {
            visits[c] += 1;
            sums[c] += w[1];
        }
    }
    HistogramPosterior { prior: prior.clone(), visits, sums }
}

/// Log-likelihood ratio `log p_{f0}/p_f` of a path, conditional on `X_0`.
pub fn log_likelihood_ratio(f0: &RegressionFn, f: &RegressionFn, states: &[f64]) -> f64 {
    states
        .windows(2)
        .map(|w| 0.5 * ((w[1] - f.eval(w[0])).powi(2) - (w[1] - f0.eval(w[0])).powi(2)))
        .sum()
}

/// Monte Carlo moments of the log-likelihood ratio over chains of `n`
/// transitions simulated under `f0`.
pub fn loglik_ratio_moments(f0: &RegressionFn, f: &RegressionFn, n: usize, replicates: usize, seed: u64) -> Result<Moments> {
    if replicates < 100 {
        return Err(invalid("at least 100 replicates are needed"));
    }
    let mut rng = rng_from_seed(seed);
    let llr: Vec<f64> = (0..replicates)
        .map(|_| log_likelihood_ratio(f0, f, &run_chain(f0, n, 1000, &mut rng)))
        .collect();
    Ok(Moments::of(&llr))
}

/// Histogram estimate of the stationary density from one long chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryDensity {
    pub lo: f64,
    pub hi: f64,
    pub density: Vec<f64>,
}

impl StationaryDensity {
    pub fn estimate(f: &RegressionFn, steps: usize, bins: usize, lo: f64, hi: f64, seed: u64) -> Self {
        let path = run_chain(f, steps, 1000, &mut rng_from_seed(seed));
        let w = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in &path[1..] {
            if x >= lo && x < hi {
                counts[((x - lo) / w) as usize] += 1;
            }
        }
        let total = steps as f64;
        Self { lo, hi, density: counts.iter().map(|&c| c as f64 / (total * w)).collect() }
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = (self.hi - self.lo) / self.density.len() as f64;
        (0..self.density.len()).map(|i| self.lo + (i as f64 + 0.5) * w).collect()
    }

    /// Midpoint-rule `∫ g q̂`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let w = (self.hi - self.lo) / self.density.len() as f64;
        self.centers().iter().zip(&self.density).map(|(&x, &d)| g(x) * d * w).sum()
    }
}

/// Per-bin integrals of `r`, `f0 r` and `f0² r`, and `∫ f0² r` outside
/// `[-A, A]`, so that `‖f_α − f0‖²` in `L2(r)` is a quadratic in the heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeDistance {
    pub r0: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub exterior: f64,
}

impl EnvelopeDistance {
    pub fn new(f0: &RegressionFn, prior: &HistogramPrior) -> Self {
        let (k, a, m) = (prior.bins, prior.half_width, prior.height_bound);
        let w = 2.0 * a / k as f64;
        let mut out = EnvelopeDistance { r0: vec![0.0; k], r1: vec![0.0; k], r2: vec![0.0; k], exterior: 0.0 };
        let br = f0.breaks();
        for c in 0..k {
            let (lo, hi) = (-a + c as f64 * w, -a + (c + 1) as f64 * w);
            out.r0[c] = envelope_mass(lo, hi, m);
            out.r1[c] = simpson_piecewise(|x| f0.eval(x) * envelope(x, m), lo, hi, &br, 1e-3, 16);
            out.r2[c] = simpson_piecewise(|x| f0.eval(x).powi(2) * envelope(x, m), lo, hi, &br, 1e-3, 16);
        }
        let lim = m + 12.0;
        let g = |x: f64| f0.eval(x).powi(2) * envelope(x, m);
        if lim > a {
            out.exterior = simpson_piecewise(g, -lim, -a, &br, 1e-3, 64) + simpson_piecewise(g, a, lim, &br, 1e-3, 64);
        }
        out
    }

    pub fn distance(&self, heights: &[f64]) -> f64 {
        let inside: f64 = heights
            .iter()
            .enumerate()
            .map(|(c, &h)| h * h * self.r0[c] - 2.0 * h * self.r1[c] + self.r2[c])
            .sum();
        (inside + self.exterior).max(0.0).sqrt()
    }
}

/// Posterior draws of `‖f_α − f0‖` in `L2(r)`.
pub fn posterior_distances(post: &HistogramPosterior, dist: &EnvelopeDistance, draws: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..draws).map(|_| dist.distance(&post.sample(&mut rng))).collect()
}

pub fn contraction_radius(
    data: &ChainData,
    prior: &HistogramPrior,
    f0: &RegressionFn,
    q: f64,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(invalid("quantile must lie in (0, 1)"));
    }
    let post = histogram_posterior(data, prior);
    let d = posterior_distances(&post, &EnvelopeDistance::new(f0, prior), draws, seed);
    Ok(crate::stats::quantile(&d, q))
}

/// Contraction experiment with `ε_n = n^{-1/3}(log n)^{1/2}`, bins of
/// width `ε_n` on `[-A, A]`, `A = M + 2√log(1/ε_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AutoregressionExperiment {
    pub height_bound: f64,
    pub truth: RegressionFn,
    pub burn_in: usize,
}

impl Default for AutoregressionExperiment {
    fn default() -> Self {
        Self { height_bound: 2.0, truth: RegressionFn::TanhScaled { amplitude: 1.5 }, burn_in: 1000 }
    }
}

impl AutoregressionExperiment {
    pub fn prior(&self, n: usize) -> Result<HistogramPrior> {
        let eps = self.theoretical_rate().eval(n as f64);
        let a = self.height_bound + 2.0 * (1.0 / eps).ln().max(0.0).sqrt();
        let bins = (2.0 * a / eps).ceil() as usize;
        HistogramPrior::new(bins, self.height_bound, a)
    }
}

impl ContractionModel for AutoregressionExperiment {
    fn id(&self) -> &str {
        "nl-autoregression"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -1.0 / 3.0, log_power: 0.5 }
    }

    fn replicate(&self, n: usize, seed: u64, draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let prior = self.prior(n)?;
        let data = simulate_chain(&self.truth, n, self.burn_in, child_seed(seed, 0))?;
        let post = histogram_posterior(&data, &prior);
        let d = posterior_distances(&post, &EnvelopeDistance::new(&self.truth, &prior), draws, child_seed(seed, 1));
        Ok(Replicate::from_draws(&d, None, q, radii))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_shift_distance() {
        let c = 1.3;
        let d2 = transition_distance_sq(&RegressionFn::Zero, &RegressionFn::Constant { value: c }, 2.0);
        assert!((d2 - 2.0 * (1.0 - (-c * c / 8.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn envelope_mass_is_one() {
        assert!((envelope_mass(-40.0, 40.0, 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncated_normal_in_far_tail() {
        let t = TruncatedNormal { mean: 0.0, sd: 1.0, lo: 40.0, hi: 41.0 };
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            let x = t.sample(&mut rng);
            assert!((40.0..=41.0).contains(&x));
        }
        let t = TruncatedNormal { mean: 0.0, sd: 1.0, lo: -1.0, hi: 1.0 };
        assert!(t.expectation().abs() < 1e-15);
    }

    #[test]
    fn empty_data_keeps_prior() {
        let prior = HistogramPrior::new(4, 1.0, 2.0).unwrap();
        let data = ChainData { states: vec![5.0], burn_in: 1000, seed: 0 };
        let post = histogram_posterior(&data, &prior);
        assert!(post.visits.iter().all(|&v| v == 0));
        assert!(post.means().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn quadratic_distance_matches_quadrature() {
        let prior = HistogramPrior::new(6, 2.0, 3.0).unwrap();
        let f0 = RegressionFn::TanhScaled { amplitude: 1.0 };
        let h = StepFunction { half_width: 3.0, heights: vec![0.5, -1.0, 0.2, 1.5, -0.3, 0.9] };
        let direct = l2_envelope(&f0, &RegressionFn::Histogram(h.clone()), 2.0);
        let quad = EnvelopeDistance::new(&f0, &prior).distance(&h.heights);
        assert!((direct - quad).abs() < 1e-8, "{direct} {quad}");
    }
}
