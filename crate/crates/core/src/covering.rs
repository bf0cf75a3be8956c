//! Covering numbers, bracketing numbers and entropy bounds.
//!
//! Counts are reported on the natural log scale throughout.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::rng::{rng_from_seed, Rng};

/// Number of intervals of half-width `eps` needed to cover `[a, b]`.
pub fn cover_interval(eps: f64, a: f64, b: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    if !(b >= a) {
        return Err(invalid("interval needs a <= b"));
    }
    Ok(((b - a) / (2.0 * eps)).ceil().max(1.0) as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Euclidean,
    Sup,
    /// `sqrt(Σ w_i (a_i − b_i)²)`.
    WeightedL2(Vec<f64>),
}

impl Metric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt(),
            Metric::Sup => a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
            Metric::WeightedL2(w) => a
                .iter()
                .zip(b)
                .zip(w)
                .map(|((x, y), w)| w * (x - y).powi(2))
                .sum::<f64>()
                .sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub metric: Metric,
}

#[derive(Debug, Clone)]
pub struct Cover {
    /// Indices of the chosen centers, in selection order.
    pub centers: Vec<usize>,
    /// Largest distance from any point to its nearest center.
    pub radius: f64,
}

/// Farthest-first traversal: start at point 0, repeatedly add the point
/// farthest from the current centers (lowest index on ties) until every
/// point is within `eps`.
///
/// Successive centers are more than `eps` apart, so the count never
/// exceeds the `eps`-packing number of the cloud.
pub fn greedy_cover(cloud: &PointCloud, eps: f64) -> Result<Cover> {
    if cloud.points.is_empty() {
        return Err(invalid("empty point cloud"));
    }
    if !(eps >= 0.0) {
        return Err(invalid("eps must be nonnegative"));
    }
    let pts = &cloud.points;
    let mut centers = vec![0usize];
    let mut dist: Vec<f64> = pts.iter().map(|p| cloud.metric.distance(p, &pts[0])).collect();
    loop {
        let (mut far, mut far_d) = (0usize, f64::NEG_INFINITY);
        for (i, &d) in dist.iter().enumerate() {
            if d > far_d {
                far = i;
                far_d = d;
            }
        }
        if far_d <= eps {
            return Ok(Cover { centers, radius: far_d });
        }
        centers.push(far);
        let c = &pts[far];
        for (i, p) in pts.iter().enumerate() {
            let d = cloud.metric.distance(p, c);
            if d < dist[i] {
                dist[i] = d;
            }
        }
    }
}

/// Volumetric bound `d log(3R/eps)` on the log covering number of a
/// Euclidean ball of radius `R`; zero once `eps >= R`, where one ball
/// suffices.
pub fn euclidean_ball_cover_bound(d: usize, radius: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !(radius > 0.0) {
        return Err(invalid("radius and eps must be positive"));
    }
    if eps >= radius {
        return Ok(0.0);
    }
    Ok(d as f64 * (3.0 * radius / eps).ln())
}

/// Uniform draws from the unit ball in `d` dimensions scaled by `radius`.
pub fn sample_ball(d: usize, radius: f64, count: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let g: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
            g.iter().map(|v| v * r / norm).collect()
        })
        .collect()
}

/// Log number of points in the `eps`-grid of the unit simplex in `k`
/// dimensions, `k log k + k log(1/eps)`.
pub fn simplex_entropy_bound(k: usize, eps: f64) -> Result<f64> {
    if k == 0 || !(eps > 0.0) {
        return Err(invalid("simplex bound needs k >= 1 and eps > 0"));
    }
    let k = k as f64;
    Ok(k * k.ln() + k * (1.0 / eps).ln())
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    if k < 64 {
        return (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum();
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Brackets for nondecreasing functions with values in `[0, 1]` on `G`
/// ordered points, measured in `L2` of the uniform weights on the points,
/// built from a fixed partition into near-equal cells.
///
/// A monotone `ψ` is summarized by where it first reaches each threshold
/// `t_v = v/(T+1)`, `v = 1..T`, located only up to a cell. On cell `c` the
/// bracket is `l = δ·#{thresholds crossed in earlier cells}` and
/// `u = δ·(1 + #{thresholds crossed up to cell c})`, with `δ = 1/(T+1)`.
/// Brackets correspond one to one with nondecreasing assignments of the
/// `T` thresholds to `C + 1` slots (the last meaning "never reached"), so
/// there are `binom(C+T, T)`. The worst-case `L2` width is
/// `δ sqrt(w((T+1)² − 1) + 1)` with `w` the largest cell weight. A cell
/// holding a single point gets the tighter lower end `δ·#{crossed up to c}`,
/// so with singleton cells throughout the width is `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellBrackets {
    pub grid_size: usize,
    pub thresholds: usize,
    /// Start index of each cell, followed by `grid_size`.
    pub cell_starts: Vec<usize>,
    pub log_count: f64,
    pub width_bound: f64,
}

impl CellBrackets {
    /// Cheapest scheme with worst-case bracket width at most `eps`.
    pub fn new(eps: f64, grid_size: usize) -> Result<Self> {
        if !(eps > 0.0) || grid_size == 0 {
            return Err(invalid("brackets need eps > 0 and a nonempty grid"));
        }
        if eps >= 1.0 {
            return Ok(Self::with_cells(grid_size, 0, 1));
        }
        let mut best: Option<Self> = None;
        let t_max = (8.0 / eps).ceil() as usize;
        for t in 1..=t_max {
            let Some(scheme) = Self::cheapest_cells(eps, grid_size, t) else { continue };
            if best.as_ref().is_none_or(|b| scheme.log_count < b.log_count) {
                best = Some(scheme);
            }
        }
        best.ok_or_else(|| invalid(format!("no bracket scheme reaches width {eps} on {grid_size} points")))
    }

    /// Fewest cells meeting width `eps` with `t` thresholds, if any.
    pub fn cheapest_cells(eps: f64, grid_size: usize, t: usize) -> Option<Self> {
        let delta = 1.0 / (t as f64 + 1.0);
        if delta > eps {
            return None;
        }
        let w = (eps * eps / (delta * delta) - 1.0) / ((t as f64 + 1.0).powi(2) - 1.0);
        // Largest admissible cell size in points; near-equal cells have
        // at most ceil(G / C) points.
        let size = (w * grid_size as f64 * (1.0 + 1e-12)).floor() as usize;
        // Singleton cells always reach width `δ`.
        let c = if size == 0 { grid_size } else { grid_size.div_ceil(size).clamp(1, grid_size) };
        let s = Self::with_cells(grid_size, t, c);
        (s.width_bound <= eps * (1.0 + 1e-9)).then_some(s)
    }

    /// Scheme with `thresholds` thresholds and `cells` near-equal cells.
    pub fn with_cells(grid_size: usize, thresholds: usize, cells: usize) -> Self {
        let cells = cells.clamp(1, grid_size);
        let cell_starts: Vec<usize> = (0..=cells).map(|c| c * grid_size / cells).collect();
        let w_max = cell_starts.windows(2).map(|w| w[1] - w[0]).max().unwrap() as f64 / grid_size as f64;
        let delta = 1.0 / (thresholds as f64 + 1.0);
        let t1 = thresholds as f64 + 1.0;
        let width_bound = if cells == grid_size {
            delta
        } else {
            (delta * delta * (w_max * (t1 * t1 - 1.0) + 1.0)).sqrt()
        };
        let log_count = ln_binomial((cells + thresholds) as u64, thresholds as u64);
        Self { grid_size, thresholds, cell_starts, log_count, width_bound }
    }

    pub fn cells(&self) -> usize {
        self.cell_starts.len() - 1
    }

    fn cell_of(&self, i: usize) -> usize {
        self.cell_starts.partition_point(|&s| s <= i) - 1
    }

    /// Cell index (or `cells()` for "never") where each threshold is first
    /// reached by `psi`.
    pub fn crossing_cells(&self, psi: &[f64]) -> Vec<usize> {
        let delta = 1.0 / (self.thresholds as f64 + 1.0);
        (1..=self.thresholds)
            .map(|v| {
                let t = v as f64 * delta;
                match psi.iter().position(|&p| p >= t) {
                    Some(i) => self.cell_of(i),
                    None => self.cells(),
                }
            })
            .collect()
    }

    /// The bracket `(l, u)` from a sorted list of crossing cells.
    pub fn bracket_from_crossings(&self, crossings: &[usize]) -> (Vec<f64>, Vec<f64>) {
        let delta = 1.0 / (self.thresholds as f64 + 1.0);
        let mut lower = vec![0.0; self.grid_size];
        let mut upper = vec![0.0; self.grid_size];
        for c in 0..self.cells() {
            let before = crossings.iter().filter(|&&k| k < c).count() as f64;
            let upto = crossings.iter().filter(|&&k| k <= c).count() as f64;
            // A single point is pinned between consecutive thresholds.
            let single = self.cell_starts[c + 1] - self.cell_starts[c] == 1;
            for i in self.cell_starts[c]..self.cell_starts[c + 1] {
                lower[i] = delta * if single { upto } else { before };
                upper[i] = (delta * (1.0 + upto)).min(1.0);
            }
        }
        (lower, upper)
    }

    /// Bracket containing the nondecreasing `psi` (values in `[0, 1]`).
    pub fn bracket_of(&self, psi: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        check_monotone_unit(psi, self.grid_size)?;
        Ok(self.bracket_from_crossings(&self.crossing_cells(psi)))
    }

    /// Every bracket, when there are at most `limit`.
    pub fn enumerate(&self, limit: usize) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
        if self.log_count > (limit as f64).ln() + 1e-9 {
            return Err(invalid(format!("{:.3e} brackets exceed the limit {limit}", self.log_count.exp())));
        }
        let mut out = Vec::new();
        let mut seq = vec![0usize; self.thresholds];
        loop {
            out.push(self.bracket_from_crossings(&seq));
            // Next nondecreasing sequence over 0..=cells.
            let mut i = self.thresholds;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if seq[i] < self.cells() {
                    let v = seq[i] + 1;
                    for s in seq.iter_mut().skip(i) {
                        *s = v;
                    }
                    break;
                }
            }
        }
    }
}

fn check_monotone_unit(psi: &[f64], grid_size: usize) -> Result<()> {
    if psi.len() != grid_size {
        return Err(invalid("function length does not match the grid"));
    }
    if psi.windows(2).any(|w| w[1] < w[0]) || psi.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(invalid("function must be nondecreasing with values in [0, 1]"));
    }
    Ok(())
}

/// `L2` distance under uniform weights.
pub fn l2_uniform(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

/// Bracketing of nondecreasing `[0, 1]`-valued functions on a grid of
/// `grid_size` points at `L2` width `eps`.
pub fn monotone_class_entropy(eps: f64, grid_size: usize) -> Result<CellBrackets> {
    CellBrackets::new(eps, grid_size)
}

/// Upper brackets for nondecreasing link functions `L <= ψ <= U` on the
/// given covariates, in `L2` of the empirical covariate distribution.
/// Every such link has an element `u >= ψ` within `eps`.
///
/// Element `u` is a nondecreasing staircase over fixed cells of the sorted
/// covariates with values `L + (U − L) s/(T+1)`, `s = 1..=T+1`. Since the
/// cells are fixed, a posterior over the sieve factorizes along the cells;
/// see [`crate::inid::StaircasePosterior`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonBracketing {
    pub lower: f64,
    pub upper: f64,
    pub eps: f64,
    /// Indices that sort the covariates.
    pub order: Vec<usize>,
    pub scheme: CellBrackets,
}

pub fn poisson_bracketing(eps: f64, lower: f64, upper: f64, covariates: &[f64]) -> Result<PoissonBracketing> {
    if !(upper > lower) || !(lower > 0.0) {
        return Err(invalid("need 0 < L < U"));
    }
    if covariates.is_empty() {
        return Err(invalid("no covariates"));
    }
    let scheme = CellBrackets::new(eps / (upper - lower), covariates.len())?;
    let mut order: Vec<usize> = (0..covariates.len()).collect();
    order.sort_by(|&a, &b| covariates[a].total_cmp(&covariates[b]));
    Ok(PoissonBracketing { lower, upper, eps, order, scheme })
}

impl PoissonBracketing {
    pub fn log_count(&self) -> f64 {
        self.scheme.log_count
    }

    /// Link values available to a staircase, indexed by level `s − 1`.
    pub fn level_values(&self) -> Vec<f64> {
        let t1 = self.scheme.thresholds as f64 + 1.0;
        (1..=self.scheme.thresholds + 1)
            .map(|s| self.lower + (self.upper - self.lower) * s as f64 / t1)
            .collect()
    }

    /// Ranges of positions in the sorted covariate order, one per cell.
    pub fn cell_ranges(&self) -> Vec<std::ops::Range<usize>> {
        self.scheme.cell_starts.windows(2).map(|w| w[0]..w[1]).collect()
    }

    /// Link values at the covariates (original order) for a nondecreasing
    /// level sequence, one level index per cell.
    pub fn link_from_levels(&self, levels: &[usize]) -> Vec<f64> {
        let vals = self.level_values();
        let mut out = vec![0.0; self.order.len()];
        for (c, r) in self.cell_ranges().into_iter().enumerate() {
            for pos in r {
                out[self.order[pos]] = vals[levels[c]];
            }
        }
        out
    }

    fn from_unit(&self, unit: &[f64]) -> Vec<f64> {
        let span = self.upper - self.lower;
        let mut out = vec![0.0; self.order.len()];
        for (pos, &i) in self.order.iter().enumerate() {
            out[i] = self.lower + span * unit[pos];
        }
        out
    }

    /// The sieve element dominating a nondecreasing link, given at the
    /// covariates in original order.
    pub fn upper_bracket_of(&self, link: &[f64]) -> Result<Vec<f64>> {
        if link.len() != self.order.len() {
            return Err(invalid("link length does not match the covariates"));
        }
        let span = self.upper - self.lower;
        let unit: Vec<f64> =
            self.order.iter().map(|&i| ((link[i] - self.lower) / span).clamp(0.0, 1.0)).collect();
        let (_, up) = self.scheme.bracket_of(&unit)?;
        Ok(self.from_unit(&up))
    }

    /// Every sieve element as link values at the covariates, when there
    /// are at most `limit`.
    pub fn enumerate(&self, limit: usize) -> Result<Vec<Vec<f64>>> {
        Ok(self.scheme.enumerate(limit)?.into_iter().map(|(_, up)| self.from_unit(&up)).collect())
    }
}

/// Summary emitted by the `cover` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverReport {
    pub class_id: String,
    pub eps: f64,
    pub achieved_count: f64,
    pub achieved_log_count: f64,
    /// Natural-log upper bound the achieved count is compared against.
    pub theoretical_bound: f64,
    pub notes: String,
}

/// Which class the `cover` command works on.
#[derive(Debug, Clone)]
pub enum CoverClass {
    Interval { a: f64, b: f64 },
    Ball { dim: usize, radius: f64, points: usize, seed: u64 },
    Monotone { grid_size: usize },
    PoissonSieve { lower: f64, upper: f64, n: usize },
}

pub fn cover_report(class: &CoverClass, eps: f64) -> Result<CoverReport> {
    match *class {
        CoverClass::Interval { a, b } => {
            let n = cover_interval(eps, a, b)?;
            Ok(CoverReport {
                class_id: "interval".into(),
                eps,
                achieved_count: n as f64,
                achieved_log_count: (n as f64).ln(),
                theoretical_bound: ((b - a) / eps + 1.0).ln(),
                notes: format!("[{a}, {b}] covered by intervals of half-width eps"),
            })
        }
        CoverClass::Ball { dim, radius, points, seed } => {
            let mut rng = rng_from_seed(seed);
            let cloud = PointCloud { points: sample_ball(dim, radius, points, &mut rng), metric: Metric::Euclidean };
            let cover = greedy_cover(&cloud, eps)?;
            let n = cover.centers.len() as f64;
            Ok(CoverReport {
                class_id: "ball".into(),
                eps,
                achieved_count: n,
                achieved_log_count: n.ln(),
                theoretical_bound: euclidean_ball_cover_bound(dim, radius, eps)?,
                notes: format!("greedy cover of {points} uniform points in the {dim}-ball of radius {radius}"),
            })
        }
        CoverClass::Monotone { grid_size } => {
            let b = monotone_class_entropy(eps, grid_size)?;
            Ok(CoverReport {
                class_id: "monotone".into(),
                eps,
                achieved_count: b.log_count.exp(),
                achieved_log_count: b.log_count,
                theoretical_bound: canonical_bound(eps, grid_size),
                notes: format!(
                    "{} thresholds, {} cells, width bound {:.4}; bound uses threshold spacing eps/sqrt2",
                    b.thresholds,
                    b.cells(),
                    b.width_bound
                ),
            })
        }
        CoverClass::PoissonSieve { lower, upper, n } => {
            let z: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
            let b = poisson_bracketing(eps, lower, upper, &z)?;
            Ok(CoverReport {
                class_id: "poisson-sieve".into(),
                eps,
                achieved_count: b.log_count().exp(),
                achieved_log_count: b.log_count(),
                theoretical_bound: canonical_bound(eps / (upper - lower), n),
                notes: format!(
                    "links in [{lower}, {upper}] on {n} equispaced covariates; {} levels, {} cells",
                    b.scheme.thresholds + 1,
                    b.scheme.cells()
                ),
            })
        }
    }
}

/// Log count of the scheme with threshold spacing `eps/sqrt 2`, an
/// explicit upper bound for the optimized scheme.
fn canonical_bound(eps: f64, grid_size: usize) -> f64 {
    if eps >= 1.0 {
        return 0.0;
    }
    let t = ((std::f64::consts::SQRT_2 / eps).ceil() as usize).saturating_sub(1).max(1);
    match CellBrackets::cheapest_cells(eps, grid_size, t) {
        Some(s) => s.log_count,
        None => CellBrackets::with_cells(grid_size, t, grid_size).log_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_examples() {
        assert_eq!(cover_interval(0.25, 0.0, 1.0).unwrap(), 2);
        assert_eq!(cover_interval(0.05, 0.0, 1.0).unwrap(), 10);
        assert_eq!(cover_interval(1.0, 3.0, 3.0).unwrap(), 1);
        assert!(cover_interval(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn two_points() {
        let cloud = PointCloud { points: vec![vec![0.0], vec![1.0]], metric: Metric::Euclidean };
        assert_eq!(greedy_cover(&cloud, 1.5).unwrap().centers.len(), 1);
        assert_eq!(greedy_cover(&cloud, 0.5).unwrap().centers.len(), 2);
        let empty = PointCloud { points: vec![], metric: Metric::Sup };
        assert!(greedy_cover(&empty, 0.1).is_err());
    }

    #[test]
    fn grid_cover_in_range() {
        let pts: Vec<Vec<f64>> = (0..=100).map(|i| vec![i as f64 / 100.0]).collect();
        let c = greedy_cover(&PointCloud { points: pts, metric: Metric::Euclidean }, 0.1).unwrap();
        assert!((5..=10).contains(&c.centers.len()), "{}", c.centers.len());
        assert!(c.radius <= 0.1);
    }

    #[test]
    fn ball_bound_values() {
        assert_eq!(euclidean_ball_cover_bound(1, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(euclidean_ball_cover_bound(3, 1.0, 2.0).unwrap(), 0.0);
        assert!((euclidean_ball_cover_bound(4, 5.0, 1.0).unwrap() - 4.0 * 15f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn simplex_value() {
        assert!((simplex_entropy_bound(5, 0.1).unwrap() - 19.560).abs() < 1e-3);
    }

    #[test]
    fn monotone_trivial_and_coarse() {
        let b = monotone_class_entropy(1.0, 50).unwrap();
        assert_eq!(b.log_count, 0.0);
        let b = monotone_class_entropy(0.9, 50).unwrap();
        assert!(b.log_count <= 4f64.ln() + 1e-12, "{}", b.log_count);
        assert_eq!(b.enumerate(10).unwrap().len(), b.log_count.exp().round() as usize);
    }

    #[test]
    fn enumeration_count_matches_binomial() {
        let s = CellBrackets::with_cells(12, 3, 4);
        assert_eq!(s.enumerate(1000).unwrap().len(), 35);
        assert!((s.log_count - 35f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn brackets_contain_and_are_narrow() {
        let mut rng = rng_from_seed(3);
        let b = monotone_class_entropy(0.2, 200).unwrap();
        for _ in 0..100 {
            let mut psi: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
            psi.sort_by(f64::total_cmp);
            let (l, u) = b.bracket_of(&psi).unwrap();
            for i in 0..200 {
                assert!(l[i] <= psi[i] && psi[i] <= u[i]);
            }
            assert!(l2_uniform(&l, &u) <= 0.2 + 1e-12);
        }
    }

    #[test]
    fn constant_links_single_bracket() {
        let z: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let b = poisson_bracketing(0.5, 1.0, 1.4, &z).unwrap();
        assert_eq!(b.log_count(), 0.0);
        assert_eq!(b.enumerate(2).unwrap().len(), 1);
    }
}
