//! Error probabilities of the tests behind the rate theorems, estimated by
//! simulation and set against their exponential bounds, and the frequency
//! of a small evidence integral.

use rand::Rng as _;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::covering::{greedy_cover, Metric, PointCloud};
use crate::divergences::{hellinger_sq, Density};
use crate::error::{invalid, Result};
use crate::rng::{child_seed, rng_from_seed, Rng};
use crate::stats::{norm_sf, proportion};

/// Standard errors of slack allowed above a bound.
pub const SE_SLACK: f64 = 4.0;

/// Monte Carlo error probabilities of one test, with their bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub label: String,
    pub n: usize,
    /// Separation: `‖θ1 − θ0‖`, `d_n(θ0, θ1)` or `ε`, depending on the test.
    pub eps: f64,
    pub replicates: usize,
    pub type_one: f64,
    pub type_one_se: f64,
    pub type_one_bound: f64,
    /// Worst type-II error over the alternatives tried.
    pub type_two: Option<f64>,
    pub type_two_se: Option<f64>,
    pub type_two_bound: Option<f64>,
}

impl TestReport {
    /// Whether each estimate is at most its bound plus [`SE_SLACK`]
    /// standard errors.
    pub fn within_bounds(&self) -> bool {
        let one = self.type_one <= self.type_one_bound + SE_SLACK * self.type_one_se;
        let two = match (self.type_two, self.type_two_se, self.type_two_bound) {
            (Some(e), Some(se), Some(b)) => e <= b + SE_SLACK * se,
            _ => true,
        };
        one && two
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Test of `θ0` against `θ1` in the white-noise model `X = θ + n^{-1/2}Z`:
/// reject when `2⟨θ1 − θ0, X⟩ > ‖θ1‖² − ‖θ0‖²`. Type II is taken at `θ1`
/// and at the points `θ1 ± (‖θ1 − θ0‖/4)u` along and across `θ1 − θ0`.
pub fn whitenoise_lr_test(theta0: &[f64], theta1: &[f64], n: usize, replicates: usize, seed: u64) -> Result<TestReport> {
    if theta0.len() != theta1.len() {
        return Err(invalid("θ0 and θ1 need the same length"));
    }
    let delta: Vec<f64> = theta1.iter().zip(theta0).map(|(a, b)| a - b).collect();
    let d = norm(&delta);
    if !(d > 0.0) || n == 0 || replicates == 0 {
        return Err(invalid("need θ0 ≠ θ1, n >= 1 and replicates >= 1"));
    }
    let cut = 0.5 * (dot(theta1, theta1) - dot(theta0, theta0));
    let sd = d / (n as f64).sqrt();
    // ⟨θ1 − θ0, X⟩ ~ N(⟨θ1 − θ0, θ⟩, ‖θ1 − θ0‖²/n).
    let reject_rate = |theta: &[f64], stream: u64| {
        let mut rng = rng_from_seed(child_seed(seed, stream));
        let m = dot(&delta, theta);
        let hits = (0..replicates).filter(|_| m + sd * rng.sample::<f64, _>(StandardNormal) > cut).count();
        proportion(hits, replicates)
    };
    let (type_one, type_one_se) = reject_rate(theta0, 0);
    let mut alternatives = vec![theta1.to_vec()];
    for s in [-0.25, 0.25] {
        alternatives.push(theta1.iter().zip(&delta).map(|(t, u)| t + s * u).collect());
    }
    if let Some(cross) = orthogonal_unit(&delta) {
        alternatives.push(theta1.iter().zip(&cross).map(|(t, u)| t + 0.25 * d * u).collect());
    }
    let mut worst = (0.0, 0.0);
    for (i, alt) in alternatives.iter().enumerate() {
        let (r, se) = reject_rate(alt, 1 + i as u64);
        if 1.0 - r > worst.0 {
            worst = (1.0 - r, se);
        }
    }
    let s = (n as f64).sqrt() * d;
    Ok(TestReport {
        label: "white-noise".into(),
        n,
        eps: d,
        replicates,
        type_one,
        type_one_se,
        type_one_bound: norm_sf(s / 2.0),
        type_two: Some(worst.0),
        type_two_se: Some(worst.1),
        type_two_bound: Some(norm_sf(s / 4.0)),
    })
}

fn orthogonal_unit(v: &[f64]) -> Option<Vec<f64>> {
    if v.len() < 2 {
        return None;
    }
    let i = (0..v.len()).fold(0, |b, i| if v[i].abs() < v[b].abs() { i } else { b });
    let mut e = vec![0.0; v.len()];
    e[i] = 1.0;
    let c = dot(&e, v) / dot(v, v);
    let w: Vec<f64> = e.iter().zip(v).map(|(a, b)| a - c * b).collect();
    let l = norm(&w);
    Some(w.into_iter().map(|x| x / l).collect())
}

/// One-parameter families for i.i.d. product experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductFamily {
    /// `N(θ, 1)`.
    Normal,
    /// `Poisson(θ)`.
    Poisson,
    /// `Bernoulli(θ)`.
    Bernoulli,
}

impl ProductFamily {
    pub fn density(self, theta: f64) -> Result<Density> {
        match self {
            ProductFamily::Normal => Ok(Density::normal_location(theta)),
            ProductFamily::Poisson => Density::poisson(theta),
            ProductFamily::Bernoulli => Density::bernoulli(theta),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProductFamily::Normal => "normal",
            ProductFamily::Poisson => "poisson",
            ProductFamily::Bernoulli => "bernoulli",
        }
    }

    fn hellinger(self, a: f64, b: f64) -> Result<f64> {
        Ok(hellinger_sq(&self.density(a)?, &self.density(b)?)?.sqrt())
    }

    /// Draw of the sufficient statistic `Σ X_i` of `n` observations.
    fn sample_sum(self, theta: f64, n: usize, rng: &mut Rng) -> f64 {
        match self {
            ProductFamily::Normal => n as f64 * theta + (n as f64).sqrt() * rng.sample::<f64, _>(StandardNormal),
            ProductFamily::Poisson => Poisson::new(n as f64 * theta).unwrap().sample(rng),
            ProductFamily::Bernoulli => Binomial::new(n as u64, theta).unwrap().sample(rng) as f64,
        }
    }

    /// `log(p_1/p_0)` of `n` observations with sum `s`.
    fn log_ratio(self, theta0: f64, theta1: f64, n: usize, s: f64) -> f64 {
        let n = n as f64;
        match self {
            ProductFamily::Normal => (theta1 - theta0) * s - 0.5 * n * (theta1 * theta1 - theta0 * theta0),
            ProductFamily::Poisson => s * (theta1 / theta0).ln() - n * (theta1 - theta0),
            ProductFamily::Bernoulli => {
                s * (theta1 / theta0).ln() + (n - s) * ((1.0 - theta1) / (1.0 - theta0)).ln()
            }
        }
    }

    /// Far end of the parameter range above or below `from`.
    fn range_end(self, from: f64, toward_larger: bool) -> f64 {
        match (self, toward_larger) {
            (ProductFamily::Normal, true) => from + 50.0,
            (ProductFamily::Normal, false) => from - 50.0,
            (ProductFamily::Poisson, true) => from * 50.0 + 50.0,
            (ProductFamily::Poisson, false) => 1e-12,
            (ProductFamily::Bernoulli, true) => 1.0 - 1e-12,
            (ProductFamily::Bernoulli, false) => 1e-12,
        }
    }
}

/// Point on the segment from `theta1` to `end` at Hellinger distance
/// `target` from `theta1`, or `end` when the whole segment is closer.
fn boundary_point(family: ProductFamily, theta1: f64, end: f64, target: f64) -> Result<f64> {
    if family.hellinger(theta1, end)? <= target {
        return Ok(end);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if family.hellinger(theta1, theta1 + mid * (end - theta1))? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(theta1 + lo * (end - theta1))
}

/// Likelihood ratio test `1{p_1 > p_0}` between the `n`-fold products at
/// `theta0` and `theta1`. Type II is taken at `theta1` and at the two
/// parameters on either side of it at distance `d_n(θ0, θ1)/18`; both
/// errors are compared with `e^{-½ n d_n²(θ0, θ1)}`.
pub fn product_lr_test(
    family: ProductFamily,
    theta0: f64,
    theta1: f64,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<TestReport> {
    let d = family.hellinger(theta0, theta1)?;
    if !(d > 0.0) || n == 0 || replicates == 0 {
        return Err(invalid("need distinct laws, n >= 1 and replicates >= 1"));
    }
    let reject_rate = |theta: f64, stream: u64| {
        let mut rng = rng_from_seed(child_seed(seed, stream));
        let hits = (0..replicates)
            .filter(|_| family.log_ratio(theta0, theta1, n, family.sample_sum(theta, n, &mut rng)) > 0.0)
            .count();
        proportion(hits, replicates)
    };
    let (type_one, type_one_se) = reject_rate(theta0, 0);
    let larger = theta0 > theta1;
    let alternatives = [
        theta1,
        boundary_point(family, theta1, family.range_end(theta1, larger), d / 18.0)?,
        boundary_point(family, theta1, family.range_end(theta1, !larger), d / 18.0)?,
    ];
    let mut worst = (0.0, 0.0);
    for (i, &alt) in alternatives.iter().enumerate() {
        let (r, se) = reject_rate(alt, 1 + i as u64);
        if 1.0 - r > worst.0 {
            worst = (1.0 - r, se);
        }
    }
    let bound = (-0.5 * n as f64 * d * d).exp();
    Ok(TestReport {
        label: family.name().into(),
        n,
        eps: d,
        replicates,
        type_one,
        type_one_se,
        type_one_bound: bound,
        type_two: Some(worst.0),
        type_two_se: Some(worst.1),
        type_two_bound: Some(bound),
    })
}

/// Points of one shell and the net of test points covering it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    /// `j` in `jε <= ‖θ − θ0‖ < (j+1)ε`.
    pub index: usize,
    pub net: Vec<Vec<f64>>,
    pub alternatives: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellReport {
    pub index: usize,
    pub net_size: usize,
    /// Type-I error of each net point's test, from the common draws.
    pub point_type_one: Vec<f64>,
    /// Worst type-II error of the combined test over the shell's
    /// alternatives.
    pub type_two: f64,
    pub type_two_se: f64,
    /// Largest type-II bound `1 − Φ(√n‖θ1 − θ0‖/4)` over the net.
    pub type_two_bound: f64,
}

/// Combined test over all shells, rejecting when any net point's test
/// rejects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub n: usize,
    pub eps: f64,
    pub replicates: usize,
    pub shells: Vec<ShellReport>,
    /// Empirical type-I error of the combined test.
    pub type_one: f64,
    pub type_one_se: f64,
    /// Sum of the per-point type-I estimates, the union bound.
    pub type_one_accounting: f64,
    /// `Σ_j Σ_{θ1 ∈ net j} (1 − Φ(√n‖θ1 − θ0‖/2))`.
    pub series_bound: f64,
}

impl AggregateReport {
    pub fn to_report(&self) -> TestReport {
        let worst = self.shells.iter().fold(None::<&ShellReport>, |b, s| match b {
            Some(b) if b.type_two >= s.type_two => Some(b),
            _ => Some(s),
        });
        TestReport {
            label: "aggregate".into(),
            n: self.n,
            eps: self.eps,
            replicates: self.replicates,
            type_one: self.type_one,
            type_one_se: self.type_one_se,
            type_one_bound: self.series_bound,
            type_two: worst.map(|s| s.type_two),
            type_two_se: worst.map(|s| s.type_two_se),
            type_two_bound: worst.map(|s| s.type_two_bound),
        }
    }
}

/// Simulates the combined white-noise test at `θ0` and at every shell
/// alternative.
pub fn aggregate_test(theta0: &[f64], shells: &[Shell], n: usize, eps: f64, replicates: usize, seed: u64) -> Result<AggregateReport> {
    if shells.is_empty() || shells.iter().any(|s| s.net.is_empty()) {
        return Err(invalid("every shell needs a nonempty net"));
    }
    let dim = theta0.len();
    let tests: Vec<(Vec<f64>, f64)> = shells
        .iter()
        .flat_map(|s| s.net.iter())
        .map(|t1| {
            let delta: Vec<f64> = t1.iter().zip(theta0).map(|(a, b)| a - b).collect();
            (delta, 0.5 * (dot(t1, t1) - dot(theta0, theta0)))
        })
        .collect();
    if tests.iter().any(|(d, _)| d.len() != dim || norm(d) == 0.0) {
        return Err(invalid("net points must differ from θ0 and match its dimension"));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let draw = |theta: &[f64], rng: &mut Rng| -> Vec<f64> {
        theta.iter().map(|t| t + scale * rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let rejects = |x: &[f64], k: usize| 2.0 * dot(&tests[k].0, x) > 2.0 * tests[k].1;
    let mut rng = rng_from_seed(child_seed(seed, 0));
    let mut point_hits = vec![0usize; tests.len()];
    let mut any_hits = 0usize;
    for _ in 0..replicates {
        let x = draw(theta0, &mut rng);
        let mut any = false;
        for (k, h) in point_hits.iter_mut().enumerate() {
            if rejects(&x, k) {
                *h += 1;
                any = true;
            }
        }
        any_hits += any as usize;
    }
    let (type_one, type_one_se) = proportion(any_hits, replicates);
    let point_rates: Vec<f64> = point_hits.iter().map(|&h| h as f64 / replicates as f64).collect();
    let sq = (n as f64).sqrt();
    let mut offset = 0;
    let mut reports = Vec::new();
    let mut series_bound = 0.0;
    for (j, shell) in shells.iter().enumerate() {
        let m = shell.net.len();
        let mut worst = (0.0, 0.0);
        for (a, alt) in shell.alternatives.iter().enumerate() {
            let mut rng = rng_from_seed(child_seed(seed, 1 + ((j as u64) << 32) + a as u64));
            let accepted = (0..replicates)
                .filter(|_| {
                    let x = draw(alt, &mut rng);
                    !(0..tests.len()).any(|k| rejects(&x, k))
                })
                .count();
            let (e, se) = proportion(accepted, replicates);
            if e > worst.0 {
                worst = (e, se);
            }
        }
        let dists: Vec<f64> = tests[offset..offset + m].iter().map(|(d, _)| norm(d)).collect();
        series_bound += dists.iter().map(|&d| norm_sf(sq * d / 2.0)).sum::<f64>();
        reports.push(ShellReport {
            index: shell.index,
            net_size: m,
            point_type_one: point_rates[offset..offset + m].to_vec(),
            type_two: worst.0,
            type_two_se: worst.1,
            type_two_bound: dists.iter().map(|&d| norm_sf(sq * d / 4.0)).fold(0.0, f64::max),
        });
        offset += m;
    }
    Ok(AggregateReport {
        n,
        eps,
        replicates,
        type_one_accounting: reports.iter().flat_map(|r| r.point_type_one.iter()).sum(),
        shells: reports,
        type_one,
        type_one_se,
        series_bound,
    })
}

/// Shells `jε <= ‖θ − θ0‖ < (j+1)ε`, `j = 1..=shells`, in dimension
/// `dim`: `points` uniform draws per shell, covered greedily at radius
/// `jε/4` so every alternative lies within a quarter of its net point's
/// separation.
pub fn whitenoise_shells(theta0: &[f64], eps: f64, shells: usize, points: usize, seed: u64) -> Result<Vec<Shell>> {
    let dim = theta0.len();
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(shells);
    for j in 1..=shells {
        let (r0, r1) = (j as f64 * eps, (j + 1) as f64 * eps);
        let pts: Vec<Vec<f64>> = (0..points)
            .map(|_| {
                let z: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let l = norm(&z);
                let u: f64 = rng.random();
                // Radius with density ∝ r^{dim−1} on [r0, r1).
                let r = (r0.powi(dim as i32) + u * (r1.powi(dim as i32) - r0.powi(dim as i32))).powf(1.0 / dim as f64);
                theta0.iter().zip(&z).map(|(t, zi)| t + r * zi / l).collect()
            })
            .collect();
        let cloud = PointCloud { points: pts, metric: Metric::Euclidean };
        let cover = greedy_cover(&cloud, r0 / 4.0)?;
        out.push(Shell {
            index: j,
            net: cover.centers.iter().map(|&i| cloud.points[i].clone()).collect(),
            alternatives: cloud.points,
        });
    }
    Ok(out)
}

/// Frequency of a small evidence integral in the white-noise model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceReport {
    pub n: usize,
    pub eps: f64,
    pub c: f64,
    pub k: u32,
    pub replicates: usize,
    pub frequency: f64,
    pub frequency_se: f64,
    /// `C^{-k} (nε²)^{-k/2}`.
    pub bound: f64,
    /// Acceptance rate of the restriction to the neighbourhood.
    pub acceptance: f64,
}

impl EvidenceReport {
    pub fn to_report(&self) -> TestReport {
        TestReport {
            label: format!("evidence C={} k={}", self.c, self.k),
            n: self.n,
            eps: self.eps,
            replicates: self.replicates,
            type_one: self.frequency,
            type_one_se: self.frequency_se,
            type_one_bound: self.bound,
            type_two: None,
            type_two_se: None,
            type_two_bound: None,
        }
    }
}

/// Frequency under `θ0` of `∫ p_θ/p_{θ0} dΠ̄(θ) <= e^{-(1+C)nε²}`, where
/// `Π̄` is the empirical measure of `prior_draws` draws of `N(0, τ²I)`
/// restricted to the neighbourhood `{K <= nε², V_{2,0} <= nε²}`, which in
/// this model is the ball `‖θ − θ0‖ <= ε`. The integral over this `Π̄` is
/// exact.
#[allow(clippy::too_many_arguments)]
pub fn evidence_bound_check(
    theta0: &[f64],
    prior_sd: f64,
    n: usize,
    eps: f64,
    c: f64,
    k: u32,
    prior_draws: usize,
    replicates: usize,
    seed: u64,
) -> Result<EvidenceReport> {
    if !(c > 0.0) || k < 2 || !(eps > 0.0) || prior_draws == 0 || replicates == 0 {
        return Err(invalid("need C > 0, k >= 2, ε > 0 and positive draw counts"));
    }
    let mut rng = rng_from_seed(child_seed(seed, 0));
    let mut support = Vec::with_capacity(prior_draws);
    let mut proposals = 0usize;
    while support.len() < prior_draws {
        proposals += 1;
        if proposals > 1000 * prior_draws.max(1000) && support.is_empty() {
            return Err(invalid("restricted prior is empty: no proposal fell in the neighbourhood"));
        }
        let theta: Vec<f64> = theta0.iter().map(|_| prior_sd * rng.sample::<f64, _>(StandardNormal)).collect();
        let (kl, v) = crate::whitenoise::kl_whitenoise(theta0, &theta, n);
        let ne2 = n as f64 * eps * eps;
        if kl <= ne2 && v <= ne2 {
            support.push(theta.iter().zip(theta0).map(|(a, b)| a - b).collect::<Vec<f64>>());
        }
    }
    let ne2 = n as f64 * eps * eps;
    let sq = (n as f64).sqrt();
    let threshold = -(1.0 + c) * ne2;
    let mut rng = rng_from_seed(child_seed(seed, 1));
    let mut hits = 0usize;
    let mut logs = vec![0.0; prior_draws];
    for _ in 0..replicates {
        // log p_θ/p_{θ0} = √n⟨θ − θ0, Z⟩ − ½n‖θ − θ0‖² with X = θ0 + Z/√n.
        let z: Vec<f64> = theta0.iter().map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        for (l, d) in logs.iter_mut().zip(&support) {
            *l = sq * dot(d, &z) - 0.5 * n as f64 * dot(d, d);
        }
        let log_evidence = crate::stats::log_sum_exp(&logs) - (prior_draws as f64).ln();
        hits += (log_evidence <= threshold) as usize;
    }
    let (frequency, frequency_se) = proportion(hits, replicates);
    Ok(EvidenceReport {
        n,
        eps,
        c,
        k,
        replicates,
        frequency,
        frequency_se,
        bound: 1.0 / (c.powi(k as i32) * ne2.powf(k as f64 / 2.0)),
        acceptance: prior_draws as f64 / proposals as f64,
    })
}

/// Named batch of checks, as run by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma5,
    Lemma2,
    Lemma9,
    Lemma10,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma5" => Ok(Suite::Lemma5),
            "lemma2" => Ok(Suite::Lemma2),
            "lemma9" => Ok(Suite::Lemma9),
            "lemma10" => Ok(Suite::Lemma10),
            _ => Err(invalid(format!("unknown suite {s:?}; expected lemma5, lemma2, lemma9 or lemma10"))),
        }
    }
}

/// Sample sizes of the test matrices.
pub const MATRIX_SIZES: [usize; 3] = [20, 50, 100];

/// Separations per family: normal `θ1 − θ0` with `θ0 = 0`, Poisson `λ1`
/// with `λ0 = 2`, Bernoulli `p1` with `p0 = 0.5`.
pub fn matrix_alternatives(family: ProductFamily) -> (f64, [f64; 3]) {
    match family {
        ProductFamily::Normal => (0.0, [0.25, 0.5, 0.8]),
        ProductFamily::Poisson => (2.0, [2.5, 3.0, 4.0]),
        ProductFamily::Bernoulli => (0.5, [0.6, 0.7, 0.9]),
    }
}

pub fn run_suite(suite: Suite, replicates: usize, seed: u64) -> Result<Vec<TestReport>> {
    let mut out = Vec::new();
    match suite {
        Suite::Lemma5 => {
            for (i, &n) in MATRIX_SIZES.iter().enumerate() {
                for (j, &s) in [0.25, 0.5, 0.8].iter().enumerate() {
                    let theta0 = [0.3, -0.2, 0.1];
                    let theta1 = [0.3 + s * 0.6, -0.2 + s * 0.8, 0.1];
                    out.push(whitenoise_lr_test(&theta0, &theta1, n, replicates, child_seed(seed, (i * 3 + j) as u64))?);
                }
            }
        }
        Suite::Lemma2 => {
            for (f, family) in [ProductFamily::Normal, ProductFamily::Poisson, ProductFamily::Bernoulli].into_iter().enumerate() {
                let (theta0, alts) = matrix_alternatives(family);
                for (i, &n) in MATRIX_SIZES.iter().enumerate() {
                    for (j, &theta1) in alts.iter().enumerate() {
                        let s = child_seed(seed, (f * 9 + i * 3 + j) as u64);
                        out.push(product_lr_test(family, theta0, theta1, n, replicates, s)?);
                    }
                }
            }
        }
        Suite::Lemma9 => {
            let theta0 = [0.2, -0.1];
            for (i, &n) in MATRIX_SIZES.iter().enumerate() {
                let eps = 2.0 / (n as f64).sqrt();
                let shells = whitenoise_shells(&theta0, eps, 3, 150, child_seed(seed, 100 + i as u64))?;
                out.push(aggregate_test(&theta0, &shells, n, eps, replicates, child_seed(seed, i as u64))?.to_report());
            }
        }
        Suite::Lemma10 => {
            let theta0 = [0.5, -0.25, 0.125];
            let n = 100;
            for (i, ne2) in [4.0f64, 16.0, 64.0].into_iter().enumerate() {
                let eps = (ne2 / n as f64).sqrt();
                let r = evidence_bound_check(&theta0, 1.0, n, eps, 1.0, 2, 200, replicates, child_seed(seed, i as u64))?;
                out.push(r.to_report());
            }
        }
    }
    Ok(out)
}
