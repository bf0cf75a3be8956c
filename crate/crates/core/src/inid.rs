//! Independent, non-identically distributed experiments: Poisson
//! regression on a finite sieve of monotone links, binary regression with
//! a Dirichlet process link prior, and one-dimensional parametric models on
//! a grid.

use rand::Rng as _;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::covering::{poisson_bracketing, PoissonBracketing};
use crate::error::{invalid, Error, Result};
use crate::harness::{ContractionModel, Replicate, TheoreticalRate};
use crate::priors::BaseShape;
use crate::rng::{child_seed, rng_from_seed, Rng};
use crate::stats::{effective_sample_size, log_sum_exp};

/// `Σ_x (√(e^{-λ1} μ1^x/x!) − √(e^{-λ2} μ2^x/x!))²`, the squared Hellinger
/// gap between two unnormalized Poisson-type masses:
/// `(e^{-(λ1−μ1)/2} − e^{-(λ2−μ2)/2})² + 2e^{-(λ1+λ2)/2}(e^{(μ1+μ2)/2} − e^{√(μ1μ2)})`.
pub fn poisson_generalized_hellinger(l1: f64, m1: f64, l2: f64, m2: f64) -> f64 {
    let a = (-(l1 - m1) / 2.0).exp();
    let b = (-(l2 - m2) / 2.0).exp();
    let cross = 2.0 * (-(l1 + l2) / 2.0).exp() * (((m1 + m2) / 2.0).exp() - (m1 * m2).sqrt().exp());
    (a - b).powi(2) + cross
}

/// `(½ + ¼L⁻¹) e^{U−L} (|λ1−λ2|² + |μ1−μ2|²)`.
pub fn poisson_generalized_bound(l1: f64, m1: f64, l2: f64, m2: f64, lower: f64, upper: f64) -> f64 {
    (0.5 + 0.25 / lower) * (upper - lower).exp() * ((l1 - l2).powi(2) + (m1 - m2).powi(2))
}

/// `(√p − √q)² + (√(1−p) − √(1−q))²`.
pub fn hellinger_bernoulli(p: f64, q: f64) -> f64 {
    (p.sqrt() - q.sqrt()).powi(2) + ((1.0 - p).sqrt() - (1.0 - q).sqrt()).powi(2)
}

fn poisson_hellinger_sq(a: f64, b: f64) -> f64 {
    2.0 * (1.0 - (-(a.sqrt() - b.sqrt()).powi(2) / 2.0).exp())
}

fn ln_factorial(k: u64) -> f64 {
    statrs::function::factorial::ln_factorial(k)
}

/// Poisson counts with means `psi(z_i)`, capped at `10^6`.
pub fn simulate_poisson(means: &[f64], rng: &mut Rng) -> Vec<u64> {
    means
        .iter()
        .map(|&m| (Poisson::new(m).unwrap().sample(rng) as u64).min(1_000_000))
        .collect()
}

/// Finite collection of links with the uniform prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonSieve {
    pub covariates: Vec<f64>,
    /// Link values at the covariates, one vector per element.
    pub links: Vec<Vec<f64>>,
}

impl PoissonSieve {
    pub fn new(covariates: Vec<f64>, links: Vec<Vec<f64>>) -> Result<Self> {
        if links.is_empty() {
            return Err(invalid("sieve needs at least one element"));
        }
        if links.iter().any(|l| l.len() != covariates.len() || l.iter().any(|v| !(*v > 0.0))) {
            return Err(invalid("each link needs one positive value per covariate"));
        }
        Ok(Self { covariates, links })
    }

    /// Every element of a bracketing small enough to list.
    pub fn from_bracketing(b: &PoissonBracketing, covariates: Vec<f64>, limit: usize) -> Result<Self> {
        Self::new(covariates, b.enumerate(limit)?)
    }

    pub fn log_prior(&self) -> f64 {
        -(self.links.len() as f64).ln()
    }
}

fn poisson_loglik(link: &[f64], counts: &[u64]) -> f64 {
    link.iter()
        .zip(counts)
        .map(|(&m, &x)| x as f64 * m.ln() - m - ln_factorial(x))
        .sum()
}

/// Posterior probabilities of the sieve elements, by enumeration.
pub fn sieve_posterior(sieve: &PoissonSieve, counts: &[u64]) -> Result<Vec<f64>> {
    if counts.len() != sieve.covariates.len() {
        return Err(invalid("one count per covariate is needed"));
    }
    let ll: Vec<f64> = sieve.links.iter().map(|l| poisson_loglik(l, counts)).collect();
    Ok(crate::stats::softmax(&ll))
}

/// Exact posterior over the staircase sieve of a [`PoissonBracketing`].
///
/// Elements are nondecreasing level sequences over the cells, so with the
/// uniform prior the posterior is a chain along the cells: a forward pass
/// accumulates `F_c(s) = ℓ_c(s) + log Σ_{s' <= s} exp F_{c−1}(s')`, and
/// backward sampling draws exact posterior elements.
#[derive(Debug, Clone)]
pub struct StaircasePosterior {
    pub levels: Vec<f64>,
    loglik: Vec<Vec<f64>>,
    forward: Vec<Vec<f64>>,
    pub log_normalizer: f64,
    log_count: f64,
    constant: f64,
}

impl StaircasePosterior {
    pub fn new(sieve: &PoissonBracketing, counts: &[u64]) -> Result<Self> {
        if counts.len() != sieve.order.len() {
            return Err(invalid("one count per covariate is needed"));
        }
        let levels = sieve.level_values();
        let logs: Vec<f64> = levels.iter().map(|v| v.ln()).collect();
        let mut forward: Vec<Vec<f64>> = Vec::new();
        let mut loglik = Vec::new();
        let mut constant = 0.0;
        for range in sieve.cell_ranges() {
            let (mut s, mut m) = (0.0, 0.0);
            for pos in range {
                let x = counts[sieve.order[pos]];
                s += x as f64;
                m += 1.0;
                constant -= ln_factorial(x);
            }
            let ll: Vec<f64> = levels.iter().zip(&logs).map(|(v, lv)| s * lv - m * v).collect();
            loglik.push(ll.clone());
            let row = match forward.last() {
                None => ll,
                Some(prev) => {
                    let mut acc = f64::NEG_INFINITY;
                    ll.iter()
                        .zip(prev)
                        .map(|(l, p)| {
                            acc = ln_add(acc, *p);
                            l + acc
                        })
                        .collect()
                }
            };
            forward.push(row);
        }
        let log_normalizer = log_sum_exp(forward.last().unwrap());
        Ok(Self { levels, loglik, forward, log_normalizer, log_count: sieve.log_count(), constant })
    }

    /// Log marginal likelihood of the counts under the uniform prior.
    pub fn log_evidence(&self) -> f64 {
        self.log_normalizer - self.log_count + self.constant
    }

    /// Posterior mass of `Σ_c table[c][s_c] >= threshold`, bracketed by
    /// rounding each table entry down and up to a grid of `bins` steps
    /// below the threshold.
    pub fn mass_beyond(&self, table: &[Vec<f64>], threshold: f64, bins: usize) -> Result<(f64, f64)> {
        if table.len() != self.loglik.len() || !(threshold > 0.0) || bins == 0 {
            return Err(invalid("need one table row per cell, threshold > 0 and bins >= 1"));
        }
        if self.max_total(table) < threshold {
            return Ok((0.0, 0.0));
        }
        let bound = self.log_tail_bound(table, threshold)?;
        if bound < -690.0 {
            return Ok((0.0, bound.exp()));
        }
        let h = threshold / bins as f64;
        let lower = self.tail_mass(table, |d| (d / h).floor(), bins);
        let upper = self.tail_mass(table, |d| (d / h).ceil(), bins);
        Ok((lower, upper.min(bound.exp())))
    }

    /// Largest `Σ_c table[c][s_c]` over nondecreasing level sequences.
    pub fn max_total(&self, table: &[Vec<f64>]) -> f64 {
        let mut prev: Vec<f64> = Vec::new();
        for row in table {
            prev = if prev.is_empty() {
                row.clone()
            } else {
                let mut best = f64::NEG_INFINITY;
                row.iter()
                    .zip(&prev)
                    .map(|(d, p)| {
                        best = best.max(*p);
                        d + best
                    })
                    .collect()
            };
        }
        prev.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_λ log E[exp(λ(Σ_c table[c][s_c] − threshold))]`, a Chernoff
    /// bound on the log posterior mass of `Σ_c table[c][s_c] >= threshold`.
    /// Each evaluation is one forward pass with tilted cell likelihoods.
    pub fn log_tail_bound(&self, table: &[Vec<f64>], threshold: f64) -> Result<f64> {
        if table.len() != self.loglik.len() {
            return Err(invalid("need one table row per cell"));
        }
        let f = |lambda: f64| {
            let mut prev: Vec<f64> = Vec::new();
            for (ll, d) in self.loglik.iter().zip(table) {
                let tilted = ll.iter().zip(d).map(|(l, d)| l + lambda * d);
                prev = if prev.is_empty() {
                    tilted.collect()
                } else {
                    let mut acc = f64::NEG_INFINITY;
                    tilted
                        .zip(&prev)
                        .map(|(l, p)| {
                            acc = ln_add(acc, *p);
                            l + acc
                        })
                        .collect()
                };
            }
            log_sum_exp(&prev) - self.log_normalizer - lambda * threshold
        };
        // f is convex in λ, so unimodal in log λ.
        let (mut a, mut b) = ((1e-6f64).ln(), (1e6f64).ln());
        for _ in 0..80 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if f(m1.exp()) <= f(m2.exp()) {
                b = m2;
            } else {
                a = m1;
            }
        }
        Ok(f((0.5 * (a + b)).exp()).min(0.0))
    }

    fn tail_mass(&self, table: &[Vec<f64>], quantize: impl Fn(f64) -> f64, bins: usize) -> f64 {
        let levels = self.levels.len();
        let width = bins + 1;
        let mut prev: Vec<f64> = Vec::new();
        let mut cur = vec![0.0; levels * width];
        let mut prefix = vec![0.0; width];
        for (c, ll) in self.loglik.iter().enumerate() {
            let top = ll.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            cur.iter_mut().for_each(|v| *v = 0.0);
            prefix.iter_mut().for_each(|v| *v = 0.0);
            for s in 0..levels {
                let w = (ll[s] - top).exp();
                let k = quantize(table[c][s]).min(bins as f64) as usize;
                if prev.is_empty() {
                    cur[s * width + k] = w;
                    continue;
                }
                for (b, p) in prefix.iter_mut().enumerate() {
                    *p += prev[s * width + b];
                }
                for b in 0..width {
                    cur[s * width + (b + k).min(bins)] += w * prefix[b];
                }
            }
            let total: f64 = cur.iter().sum();
            prev = cur.iter().map(|v| v / total).collect();
        }
        (0..levels).map(|s| prev[s * width + bins]).sum()
    }

    /// One exact posterior draw: a level index per cell.
    pub fn sample(&self, rng: &mut Rng) -> Vec<usize> {
        let c = self.forward.len();
        let mut out = vec![0usize; c];
        let mut cap = self.levels.len() - 1;
        for cell in (0..c).rev() {
            let row = &self.forward[cell][..=cap];
            let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = row.iter().map(|v| (v - m).exp()).collect();
            let mut u = rng.random::<f64>() * w.iter().sum::<f64>();
            let mut pick = cap;
            for (s, wi) in w.iter().enumerate() {
                if u < *wi {
                    pick = s;
                    break;
                }
                u -= wi;
            }
            out[cell] = pick;
            cap = pick;
        }
        out
    }
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Per-cell, per-level sums of `h²(Poisson(level), Poisson(ψ0(z_i)))`, so
/// that `n d_n²` of a staircase is the sum of its entries.
pub fn staircase_distance_table(sieve: &PoissonBracketing, truth: &[f64]) -> Vec<Vec<f64>> {
    let levels = sieve.level_values();
    sieve
        .cell_ranges()
        .into_iter()
        .map(|r| {
            levels
                .iter()
                .map(|&v| r.clone().map(|pos| poisson_hellinger_sq(v, truth[sieve.order[pos]])).sum())
                .collect()
        })
        .collect()
}

/// Increasing link used as the Poisson regression truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PoissonTruth {
    Linear { intercept: f64, slope: f64 },
    /// `a + b·z²`.
    Quadratic { a: f64, b: f64 },
}

impl PoissonTruth {
    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            PoissonTruth::Linear { intercept, slope } => intercept + slope * z,
            PoissonTruth::Quadratic { a, b } => a + b * z * z,
        }
    }
}

/// Poisson regression on `z_i = i/n` with the uniform prior on the sieve
/// built at width `ε_n = sieve_scale·n^{-1/3}`. Distances are `d_n`, the
/// root mean squared Hellinger distance over the covariates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoissonSieveModel {
    pub lower: f64,
    pub upper: f64,
    pub truth: PoissonTruth,
    pub sieve_scale: f64,
}

impl Default for PoissonSieveModel {
    fn default() -> Self {
        Self {
            lower: 1.0,
            upper: 3.0,
            truth: PoissonTruth::Quadratic { a: 1.2, b: 1.6 },
            sieve_scale: 1.0,
        }
    }
}

impl PoissonSieveModel {
    pub fn covariates(n: usize) -> Vec<f64> {
        (1..=n).map(|i| i as f64 / n as f64).collect()
    }

    pub fn sieve(&self, n: usize) -> Result<PoissonBracketing> {
        poisson_bracketing(self.eps_n(n), self.lower, self.upper, &Self::covariates(n))
    }

    fn posterior(&self, n: usize, seed: u64) -> Result<(StaircasePosterior, Vec<Vec<f64>>)> {
        let z = Self::covariates(n);
        let truth: Vec<f64> = z.iter().map(|&v| self.truth.eval(v)).collect();
        if truth.iter().any(|&v| v < self.lower || v > self.upper) {
            return Err(invalid("truth leaves [L, U]"));
        }
        let counts = simulate_poisson(&truth, &mut rng_from_seed(child_seed(seed, 0)));
        let sieve = self.sieve(n)?;
        Ok((StaircasePosterior::new(&sieve, &counts)?, staircase_distance_table(&sieve, &truth)))
    }

    /// Exact posterior mass of `d_n >= radius` for one replicate, bracketed
    /// as in [`StaircasePosterior::mass_beyond`] with 4000 steps.
    pub fn exact_mass_outside(&self, n: usize, seed: u64, radius: f64) -> Result<(f64, f64)> {
        let (post, table) = self.posterior(n, seed)?;
        post.mass_beyond(&table, n as f64 * radius * radius, 4000)
    }

    /// Chernoff bound on the log of [`Self::exact_mass_outside`].
    pub fn log_tail_bound(&self, n: usize, seed: u64, radius: f64) -> Result<f64> {
        let (post, table) = self.posterior(n, seed)?;
        post.log_tail_bound(&table, n as f64 * radius * radius)
    }
}

impl ContractionModel for PoissonSieveModel {
    fn id(&self) -> &str {
        "poisson-sieve"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -1.0 / 3.0, log_power: 0.0 }
    }

    fn rate_scale(&self) -> f64 {
        self.sieve_scale
    }

    fn replicate(&self, n: usize, seed: u64, draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let (post, table) = self.posterior(n, seed)?;
        let mut rng = rng_from_seed(child_seed(seed, 1));
        let d: Vec<f64> = (0..draws)
            .map(|_| {
                let s = post.sample(&mut rng);
                (s.iter().enumerate().map(|(c, &l)| table[c][l]).sum::<f64>() / n as f64).sqrt()
            })
            .collect();
        Ok(Replicate::from_draws(&d, None, q, radii))
    }
}

/// Self-normalized importance sample from the prior, keeping only a mapped
/// functional of each draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceSample<T> {
    pub values: Vec<T>,
    /// Normalized weights.
    pub weights: Vec<f64>,
    pub ess: f64,
}

/// Minimum effective sample size for a weighted posterior to be trusted.
pub const MIN_ESS: f64 = 50.0;

impl<T> ImportanceSample<T> {
    pub fn reliable(&self) -> bool {
        self.ess >= MIN_ESS
    }
}

impl ImportanceSample<f64> {
    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Standard error of the self-normalized mean by the delta method.
    pub fn mean_std_error(&self) -> f64 {
        let m = self.mean();
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| (w * (v - m)).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

pub fn importance_sample<P, T>(
    draws: usize,
    rng: &mut Rng,
    mut sampler: impl FnMut(&mut Rng) -> P,
    loglik: impl Fn(&P) -> f64,
    map: impl Fn(&P) -> T,
) -> ImportanceSample<T> {
    let mut values = Vec::with_capacity(draws);
    let mut logw = Vec::with_capacity(draws);
    for _ in 0..draws {
        let p = sampler(rng);
        logw.push(loglik(&p));
        values.push(map(&p));
    }
    let weights = if logw.iter().all(|v| *v == f64::NEG_INFINITY) {
        vec![0.0; draws]
    } else {
        crate::stats::softmax(&logw)
    };
    let ess = effective_sample_size(&weights);
    ImportanceSample { values, weights, ess }
}

/// Link used as the binary regression truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LinkFn {
    /// `1/(1 + e^{-(z − location)/scale})`.
    Logistic { location: f64, scale: f64 },
    /// `Φ((z − location)/scale)`.
    Probit { location: f64, scale: f64 },
}

impl LinkFn {
    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            LinkFn::Logistic { location, scale } => BaseShape::Logistic.cdf((z - location) / scale),
            LinkFn::Probit { location, scale } => BaseShape::Normal.cdf((z - location) / scale),
        }
    }
}

/// Mixture of Dirichlet processes: `H ~ DP(mass, γ((· − α)/β))` with
/// `(α, β)` uniform on a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpMixturePrior {
    pub mass: f64,
    pub shape: BaseShape,
    pub alpha_range: (f64, f64),
    pub beta_range: (f64, f64),
}

impl Default for DpMixturePrior {
    fn default() -> Self {
        Self { mass: 50.0, shape: BaseShape::Logistic, alpha_range: (0.2, 0.8), beta_range: (0.1, 0.5) }
    }
}

impl DpMixturePrior {
    /// `H(z_1), ..., H(z_n)` at nondecreasing covariates, drawn from the
    /// exact finite-dimensional law of the process: the increments of `H`
    /// over the cells cut at the covariates are Dirichlet with parameters
    /// `mass` times the base increments.
    pub fn sample_at(&self, sorted_z: &[f64], rng: &mut Rng) -> Vec<f64> {
        let a = uniform_in(self.alpha_range, rng);
        let b = uniform_in(self.beta_range, rng);
        let base = |z: f64| self.shape.cdf((z - a) / b);
        let mut prev = 0.0;
        let mut gammas = Vec::with_capacity(sorted_z.len() + 1);
        for &z in sorted_z.iter().chain(std::iter::once(&f64::INFINITY)) {
            let g = if z.is_finite() { base(z) } else { 1.0 };
            let shape = self.mass * (g - prev);
            prev = g;
            gammas.push(if shape > 0.0 { Gamma::new(shape, 1.0).unwrap().sample(rng) } else { 0.0 });
        }
        let total: f64 = gammas.iter().sum();
        let mut acc = 0.0;
        gammas[..sorted_z.len()]
            .iter()
            .map(|g| {
                acc += g;
                (acc / total).min(1.0)
            })
            .collect()
    }
}

fn uniform_in(r: (f64, f64), rng: &mut Rng) -> f64 {
    if r.1 > r.0 {
        rng.random_range(r.0..r.1)
    } else {
        r.0
    }
}

fn bernoulli_loglik(h: &[f64], x: &[bool]) -> f64 {
    h.iter().zip(x).map(|(&p, &xi)| if xi { p.ln() } else { (1.0 - p).ln() }).sum()
}

/// Binary responses with success probabilities `H0(z_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryModel {
    /// Nondecreasing covariates.
    pub covariates: Vec<f64>,
    pub truth: LinkFn,
}

impl BinaryModel {
    pub fn new(mut covariates: Vec<f64>, truth: LinkFn) -> Result<Self> {
        covariates.sort_by(f64::total_cmp);
        if covariates.iter().any(|&z| {
            let h = truth.eval(z);
            !(h > 0.0 && h < 1.0)
        }) {
            return Err(invalid("true link must lie strictly inside (0, 1) at the covariates"));
        }
        Ok(Self { covariates, truth })
    }

    pub fn truth_values(&self) -> Vec<f64> {
        self.covariates.iter().map(|&z| self.truth.eval(z)).collect()
    }

    pub fn simulate(&self, rng: &mut Rng) -> Vec<bool> {
        self.truth_values().into_iter().map(|p| rng.random::<f64>() < p).collect()
    }
}

/// Importance sample of the posterior on links from prior draws, keeping
/// `map(H(z_1), ..., H(z_n))` per draw.
pub fn binary_posterior_is<T>(
    model: &BinaryModel,
    x: &[bool],
    prior: &DpMixturePrior,
    draws: usize,
    seed: u64,
    map: impl Fn(&[f64]) -> T,
) -> Result<ImportanceSample<T>> {
    if draws < 10_000 {
        return Err(invalid("importance sampling needs at least 10^4 prior draws"));
    }
    if x.len() > 500 {
        return Err(invalid("importance sampling from the prior is limited to n <= 500"));
    }
    if x.len() != model.covariates.len() {
        return Err(invalid("one response per covariate is needed"));
    }
    let mut rng = rng_from_seed(seed);
    Ok(importance_sample(
        draws,
        &mut rng,
        |r| prior.sample_at(&model.covariates, r),
        |h| bernoulli_loglik(h, x),
        |h| map(h),
    ))
}

/// `d_n` between two links given by their values at the covariates.
pub fn bernoulli_dn(h: &[f64], h0: &[f64]) -> f64 {
    (h.iter().zip(h0).map(|(&a, &b)| hellinger_bernoulli(a, b)).sum::<f64>() / h.len() as f64).sqrt()
}

/// Binary regression on `z_i = i/(n+1)` with the Dirichlet process mixture
/// prior, posterior by prior importance sampling with `draws` proposals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BinaryDpModel {
    pub prior: DpMixturePrior,
    pub truth: LinkFn,
}

impl Default for BinaryDpModel {
    fn default() -> Self {
        Self { prior: DpMixturePrior::default(), truth: LinkFn::Logistic { location: 0.5, scale: 0.25 } }
    }
}

impl ContractionModel for BinaryDpModel {
    fn id(&self) -> &str {
        "binary-dp"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -1.0 / 3.0, log_power: 1.0 / 3.0 }
    }

    fn replicate(&self, n: usize, seed: u64, draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let z: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
        let model = BinaryModel::new(z, self.truth)?;
        let x = model.simulate(&mut rng_from_seed(child_seed(seed, 0)));
        let h0 = model.truth_values();
        let is = binary_posterior_is(&model, &x, &self.prior, draws, child_seed(seed, 1), |h| bernoulli_dn(h, &h0))?;
        Ok(Replicate::from_draws(&is.values, Some(&is.weights), q, radii))
    }
}

/// One-dimensional parametric families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParametricFamily {
    /// `X_i ~ N(θ, s_i²)` with known scales cycled over the observations.
    NormalLocation { scales: Vec<f64> },
    /// `X_i ~ Uniform(0, θ)`.
    UniformEndpoint,
}

impl ParametricFamily {
    /// Exponent `α` in `h²(p_θ1, p_θ2) ≍ |θ1 − θ2|^{2α}`.
    pub fn smoothness(&self) -> f64 {
        match self {
            ParametricFamily::NormalLocation { .. } => 1.0,
            ParametricFamily::UniformEndpoint => 0.5,
        }
    }
}

/// Parametric model with a flat prior on `[prior_lo, prior_hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametricModel {
    pub family: ParametricFamily,
    pub theta0: f64,
    pub prior_lo: f64,
    pub prior_hi: f64,
}

impl ParametricModel {
    pub fn simulate(&self, n: usize, rng: &mut Rng) -> Vec<f64> {
        match &self.family {
            ParametricFamily::NormalLocation { scales } => (0..n)
                .map(|i| self.theta0 + scales[i % scales.len()] * rng.sample::<f64, _>(StandardNormal))
                .collect(),
            ParametricFamily::UniformEndpoint => (0..n).map(|_| self.theta0 * rng.random::<f64>()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPosterior {
    pub grid: Vec<f64>,
    pub probs: Vec<f64>,
}

impl GridPosterior {
    pub fn mean(&self) -> f64 {
        self.grid.iter().zip(&self.probs).map(|(t, p)| t * p).sum()
    }

    /// Node with the largest posterior mass.
    pub fn mode(&self) -> f64 {
        let i = self
            .probs
            .iter()
            .enumerate()
            .fold(0, |best, (i, &p)| if p > self.probs[best] { i } else { best });
        self.grid[i]
    }
}

/// Posterior on the grid `prior_lo + j·mesh`, exact up to the
/// discretization of the prior. Fails when more than `10^-3` of the mass
/// sits in the outer 5% of the grid at either end.
pub fn grid_posterior(model: &ParametricModel, data: &[f64], mesh: f64) -> Result<GridPosterior> {
    if !(mesh > 0.0) || !(model.prior_hi > model.prior_lo) {
        return Err(invalid("grid needs mesh > 0 and a nonempty prior interval"));
    }
    let m = ((model.prior_hi - model.prior_lo) / mesh).round() as usize;
    let grid: Vec<f64> = (0..=m).map(|j| model.prior_lo + j as f64 * mesh).collect();
    let ll: Vec<f64> = match &model.family {
        ParametricFamily::NormalLocation { scales } => {
            let (mut sw, mut swx) = (0.0, 0.0);
            for (i, &x) in data.iter().enumerate() {
                let w = 1.0 / scales[i % scales.len()].powi(2);
                sw += w;
                swx += w * x;
            }
            grid.iter().map(|&t| -0.5 * (sw * t * t - 2.0 * swx * t)).collect()
        }
        ParametricFamily::UniformEndpoint => {
            let max = data.iter().cloned().fold(0.0, f64::max);
            let n = data.len() as f64;
            grid.iter().map(|&t| if t >= max && t > 0.0 { -n * t.ln() } else { f64::NEG_INFINITY }).collect()
        }
    };
    if ll.iter().all(|v| *v == f64::NEG_INFINITY) {
        return Err(invalid("no grid node is compatible with the data"));
    }
    let probs = crate::stats::softmax(&ll);
    let band = (m + 1).div_ceil(20);
    let edge: f64 = probs[..band].iter().chain(&probs[m + 1 - band..]).sum();
    if edge > 1e-3 {
        return Err(Error::GridBoundary { mass: edge });
    }
    Ok(GridPosterior { grid, probs })
}

/// Contraction experiment for a parametric model; the grid mesh at `n` is
/// `rate(n)/mesh_divisor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParametricGridModel {
    pub model: ParametricModel,
    pub mesh_divisor: f64,
}

impl Default for ParametricGridModel {
    fn default() -> Self {
        Self {
            model: ParametricModel {
                family: ParametricFamily::UniformEndpoint,
                theta0: 1.0,
                prior_lo: 0.5,
                prior_hi: 2.0,
            },
            mesh_divisor: 20.0,
        }
    }
}

impl ContractionModel for ParametricGridModel {
    fn id(&self) -> &str {
        "parametric-grid"
    }

    fn theoretical_rate(&self) -> TheoreticalRate {
        TheoreticalRate { exponent: -1.0 / (2.0 * self.model.family.smoothness()), log_power: 0.0 }
    }

    fn replicate(&self, n: usize, seed: u64, _draws: usize, q: f64, radii: &[f64]) -> Result<Replicate> {
        let data = self.model.simulate(n, &mut rng_from_seed(child_seed(seed, 0)));
        let mesh = self.theoretical_rate().eval(n as f64) / self.mesh_divisor;
        let post = grid_posterior(&self.model, &data, mesh)?;
        let d: Vec<f64> = post.grid.iter().map(|t| (t - self.model.theta0).abs()).collect();
        Ok(Replicate {
            radius: crate::stats::weighted_quantile(&d, &post.probs, q),
            mass_outside: radii
                .iter()
                .map(|&r| d.iter().zip(&post.probs).filter(|(d, _)| **d >= r).map(|(_, p)| p).sum())
                .collect(),
            ess: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_form_matches_series() {
        for &(l1, m1, l2, m2) in &[(1.0, 1.0, 2.0, 2.0), (1.3, 1.1, 1.7, 1.9), (2.0, 1.0, 1.0, 2.0)] {
            let mut s = 0.0;
            for x in 0..300u64 {
                let lf = ln_factorial(x);
                let a = (0.5 * (-l1 + x as f64 * f64::ln(m1) - lf)).exp();
                let b = (0.5 * (-l2 + x as f64 * f64::ln(m2) - lf)).exp();
                s += (a - b).powi(2);
            }
            assert!((poisson_generalized_hellinger(l1, m1, l2, m2) - s).abs() < 1e-12);
        }
        assert!((poisson_generalized_hellinger(1.0, 1.0, 2.0, 2.0) - poisson_hellinger_sq(1.0, 2.0)).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(hellinger_bernoulli(0.0, 1.0), 2.0);
        assert!((hellinger_bernoulli(0.25, 0.75) - 0.267_949_192_431_122_7).abs() < 1e-15);
    }

    #[test]
    fn sieve_posterior_odds() {
        let sieve = PoissonSieve::new(vec![0.0], vec![vec![1.0], vec![2.0]]).unwrap();
        let p = sieve_posterior(&sieve, &[3]).unwrap();
        // Likelihood ratio 2^3 e^{-1}.
        assert!((p[1] / p[0] - 8.0 * (-1.0f64).exp()).abs() < 1e-12);
        let single = PoissonSieve::new(vec![0.0], vec![vec![1.5]]).unwrap();
        assert_eq!(sieve_posterior(&single, &[0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn staircase_matches_enumeration() {
        let z: Vec<f64> = (0..7).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = poisson_bracketing(0.5, 1.0, 2.0, &z).unwrap();
        let counts = [0, 3, 1, 2, 5, 1, 2];
        let sieve = PoissonSieve::from_bracketing(&b, z.clone(), 10_000).unwrap();
        assert!(sieve.links.len() > 3);
        let ll: Vec<f64> = sieve.links.iter().map(|l| poisson_loglik(l, &counts)).collect();
        let evidence = log_sum_exp(&ll) + sieve.log_prior();
        let post = StaircasePosterior::new(&b, &counts).unwrap();
        assert!((post.log_evidence() - evidence).abs() < 1e-10);
    }

    #[test]
    fn tail_mass_brackets_enumeration() {
        let z: Vec<f64> = (0..7).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = poisson_bracketing(0.5, 1.0, 2.0, &z).unwrap();
        let counts = [0, 3, 1, 2, 5, 1, 2];
        let truth: Vec<f64> = z.iter().map(|v| 1.5 + 0.3 * v).collect();
        let sieve = PoissonSieve::from_bracketing(&b, z.clone(), 10_000).unwrap();
        let p = sieve_posterior(&sieve, &counts).unwrap();
        let post = StaircasePosterior::new(&b, &counts).unwrap();
        let table = staircase_distance_table(&b, &truth);
        let dist: Vec<f64> = sieve
            .links
            .iter()
            .map(|l| l.iter().zip(&truth).map(|(a, t)| poisson_hellinger_sq(*a, *t)).sum())
            .collect();
        let mut sorted = dist.clone();
        sorted.sort_by(f64::total_cmp);
        let k = sorted.len() / 2;
        let threshold = 0.5 * (sorted[k] + sorted[(k..sorted.len()).find(|&j| sorted[j] > sorted[k] + 1e-6).unwrap()]);
        let exact: f64 = dist.iter().zip(&p).filter(|(d, _)| **d >= threshold).map(|(_, p)| p).sum();
        let (lo, hi) = post.mass_beyond(&table, threshold, 20_000).unwrap();
        assert!(lo <= exact + 1e-12 && exact <= hi + 1e-12, "{lo} {exact} {hi}");
        assert!(hi - lo < 1e-12);
        let bound = post.log_tail_bound(&table, threshold).unwrap();
        assert!(exact.ln() <= bound + 1e-9 && bound <= 0.0);
        let top = dist.iter().cloned().fold(0.0, f64::max);
        assert!((post.max_total(&table) - top).abs() < 1e-12);
        assert_eq!(post.mass_beyond(&table, top * 1.01, 100).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn dirichlet_marginal_is_monotone() {
        let prior = DpMixturePrior::default();
        let z: Vec<f64> = (1..=50).map(|i| i as f64 / 51.0).collect();
        let mut rng = rng_from_seed(2);
        for _ in 0..100 {
            let h = prior.sample_at(&z, &mut rng);
            assert!(h.windows(2).all(|w| w[1] >= w[0]));
            assert!(h.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn uniform_grid_mode_is_sample_max() {
        let model = ParametricModel { family: ParametricFamily::UniformEndpoint, theta0: 1.0, prior_lo: 0.5, prior_hi: 2.0 };
        let data = [0.3, 0.91, 0.5];
        let err = grid_posterior(&model, &data, 1e-3).unwrap_err();
        // Three points leave the posterior heavy at the upper edge.
        assert!(matches!(err, Error::GridBoundary { .. }));
        let data: Vec<f64> = (0..200).map(|i| 0.9 * i as f64 / 199.0).collect();
        let post = grid_posterior(&model, &data, 1e-4).unwrap();
        assert!((post.mode() - 0.9).abs() <= 1e-4);
    }
}
