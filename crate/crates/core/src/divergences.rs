//! Divergences between probability densities.
//!
//! Every measure here has two routes. The public functions [`hellinger_sq`]
//! and [`kl`] use closed forms where they exist. The `*_numeric` functions
//! integrate the defining integrand directly: trapezoid quadrature over
//! the mean plus or minus 12 standard deviations for continuous laws, and
//! series summation up to the point where the Poisson tail drops below
//! `1e-14` for counts. Grid densities always use the numeric route.
//! [`v_k`] and [`v_k0`] only have the numeric route.

use rand::Rng as _;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::quad;
use crate::rng::Rng;

/// A univariate probability law with a density against Lebesgue or
/// counting measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Density {
    /// `N(mean, 1)`.
    NormalLocation { mean: f64 },
    Normal { mean: f64, variance: f64 },
    Poisson { mean: f64 },
    Bernoulli { p: f64 },
    Exponential { mean: f64 },
    /// Tabulated density, linear between abscissas, normalized under the
    /// trapezoid rule.
    Grid { abscissas: Vec<f64>, ordinates: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Space {
    Real,
    PositiveReal,
    Counts,
    Binary,
    Tabulated,
}

const GRID_NORM_TOL: f64 = 1e-6;
const POISSON_TAIL: f64 = 1e-14;
const NORMAL_SPAN_SD: f64 = 12.0;

impl Density {
    pub fn normal_location(mean: f64) -> Self {
        Density::NormalLocation { mean }
    }

    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        let d = Density::Normal { mean, variance };
        d.validate()?;
        Ok(d)
    }

    pub fn poisson(mean: f64) -> Result<Self> {
        let d = Density::Poisson { mean };
        d.validate()?;
        Ok(d)
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        let d = Density::Bernoulli { p };
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        let d = Density::Exponential { mean };
        d.validate()?;
        Ok(d)
    }

    pub fn grid(abscissas: Vec<f64>, ordinates: Vec<f64>) -> Result<Self> {
        let d = Density::Grid { abscissas, ordinates };
        d.validate()?;
        Ok(d)
    }

    /// Build from a family name and a flat parameter list, as used on the
    /// command line.
    pub fn from_params(family: &str, params: &[f64]) -> Result<Self> {
        let need = |k: usize| -> Result<()> {
            if params.len() != k {
                return Err(invalid(format!("{family} takes {k} parameter(s), got {}", params.len())));
            }
            Ok(())
        };
        match family {
            "normal-location" => {
                need(1)?;
                Ok(Density::normal_location(params[0]))
            }
            "normal" => {
                need(2)?;
                Density::normal(params[0], params[1])
            }
            "poisson" => {
                need(1)?;
                Density::poisson(params[0])
            }
            "bernoulli" => {
                need(1)?;
                Density::bernoulli(params[0])
            }
            "exponential" => {
                need(1)?;
                Density::exponential(params[0])
            }
            other => Err(invalid(format!("unknown family {other:?}"))),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Density::NormalLocation { .. } => "normal-location",
            Density::Normal { .. } => "normal",
            Density::Poisson { .. } => "poisson",
            Density::Bernoulli { .. } => "bernoulli",
            Density::Exponential { .. } => "exponential",
            Density::Grid { .. } => "grid",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Density::NormalLocation { mean } if !mean.is_finite() => Err(invalid("mean must be finite")),
            Density::Normal { mean, variance } if !mean.is_finite() || !(*variance > 0.0) || !variance.is_finite() => {
                Err(invalid("normal needs a finite mean and positive variance"))
            }
            Density::Poisson { mean } if !(*mean > 0.0) || !mean.is_finite() => Err(invalid("poisson mean must be positive")),
            Density::Bernoulli { p } if !(0.0..=1.0).contains(p) => Err(invalid("bernoulli p must lie in [0, 1]")),
            Density::Exponential { mean } if !(*mean > 0.0) || !mean.is_finite() => {
                Err(invalid("exponential mean must be positive"))
            }
            Density::Grid { abscissas, ordinates } => {
                if abscissas.len() != ordinates.len() || abscissas.len() < 2 {
                    return Err(invalid("grid needs matching abscissas and ordinates, at least two"));
                }
                if abscissas.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(invalid("grid abscissas must be strictly increasing"));
                }
                if ordinates.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                    return Err(invalid("grid ordinates must be finite and nonnegative"));
                }
                let total = quad::trapezoid(abscissas, ordinates);
                if (total - 1.0).abs() > GRID_NORM_TOL {
                    return Err(Error::NotNormalized(total));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn space(&self) -> Space {
        match self {
            Density::NormalLocation { .. } | Density::Normal { .. } => Space::Real,
            Density::Exponential { .. } => Space::PositiveReal,
            Density::Poisson { .. } => Space::Counts,
            Density::Bernoulli { .. } => Space::Binary,
            Density::Grid { .. } => Space::Tabulated,
        }
    }

    fn normal_params(&self) -> Option<(f64, f64)> {
        match *self {
            Density::NormalLocation { mean } => Some((mean, 1.0)),
            Density::Normal { mean, variance } => Some((mean, variance)),
            _ => None,
        }
    }

    /// Log density at `x`; `-inf` off the support.
    pub fn log_pdf(&self, x: f64) -> f64 {
        match self {
            Density::NormalLocation { .. } | Density::Normal { .. } => {
                let (m, v) = self.normal_params().unwrap();
                -0.5 * (x - m).powi(2) / v - 0.5 * (2.0 * std::f64::consts::PI * v).ln()
            }
            Density::Poisson { mean } => {
                if x < 0.0 || x.fract() != 0.0 {
                    f64::NEG_INFINITY
                } else {
                    poisson_log_pmf(*mean, x)
                }
            }
            Density::Bernoulli { p } => {
                if x == 1.0 {
                    p.ln()
                } else if x == 0.0 {
                    (1.0 - p).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Density::Exponential { mean } => {
                if x < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -x / mean - mean.ln()
                }
            }
            Density::Grid { abscissas, ordinates } => grid_interp(abscissas, ordinates, x).ln(),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn mean(&self) -> f64 {
        match self {
            Density::NormalLocation { mean } | Density::Normal { mean, .. } => *mean,
            Density::Poisson { mean } | Density::Exponential { mean } => *mean,
            Density::Bernoulli { p } => *p,
            Density::Grid { abscissas, ordinates } => {
                let xy: Vec<f64> = abscissas.iter().zip(ordinates).map(|(x, y)| x * y).collect();
                quad::trapezoid(abscissas, &xy)
            }
        }
    }

    /// One draw. Grid densities are not sampled.
    pub fn sample(&self, rng: &mut Rng) -> Result<f64> {
        Ok(match self {
            Density::NormalLocation { .. } | Density::Normal { .. } => {
                let (m, v) = self.normal_params().unwrap();
                let z: f64 = rng.sample(StandardNormal);
                m + v.sqrt() * z
            }
            Density::Poisson { mean } => Poisson::new(*mean)
                .map_err(|e| invalid(e.to_string()))?
                .sample(rng),
            Density::Bernoulli { p } => (rng.random::<f64>() < *p) as u8 as f64,
            Density::Exponential { mean } => Exp::new(1.0 / mean).map_err(|e| invalid(e.to_string()))?.sample(rng),
            Density::Grid { .. } => return Err(invalid("sampling from grid densities is not supported")),
        })
    }
}

fn grid_interp(x: &[f64], y: &[f64], t: f64) -> f64 {
    if t < x[0] || t > x[x.len() - 1] {
        return 0.0;
    }
    let i = x.partition_point(|&v| v <= t).min(x.len() - 1).max(1);
    let w = (t - x[i - 1]) / (x[i] - x[i - 1]);
    y[i - 1] + w * (y[i] - y[i - 1])
}

pub(crate) fn poisson_log_pmf(mean: f64, x: f64) -> f64 {
    x * mean.ln() - mean - ln_gamma(x + 1.0)
}

/// Smallest `x` with `P(X > x) < 1e-14` under `Poisson(mean)`, from the
/// geometric tail bound beyond the mode.
pub fn poisson_tail_point(mean: f64) -> u64 {
    let mut x = mean.floor().max(0.0);
    loop {
        let next = x + 1.0;
        if next + 1.0 > mean {
            let bound = poisson_log_pmf(mean, next).exp() * (next + 1.0) / (next + 1.0 - mean);
            if bound < POISSON_TAIL {
                return x as u64;
            }
        }
        x += 1.0;
    }
}

fn check_compatible(p: &Density, q: &Density) -> Result<()> {
    p.validate()?;
    q.validate()?;
    if p.space() != q.space() {
        return Err(Error::IncompatibleSpaces(p.family().into(), q.family().into()));
    }
    if let (Density::Grid { abscissas: a, .. }, Density::Grid { abscissas: b, .. }) = (p, q) {
        if a != b {
            return Err(Error::IncompatibleSpaces("grid".into(), "grid on other abscissas".into()));
        }
    }
    Ok(())
}

/// Integrate `g(log p(x), log q(x))` over the common sample space.
fn pair_integral(p: &Density, q: &Density, g: impl Fn(f64, f64) -> f64) -> Result<f64> {
    check_compatible(p, q)?;
    Ok(match p.space() {
        Space::Real => {
            let (m1, v1) = p.normal_params().unwrap();
            let (m2, v2) = q.normal_params().unwrap();
            let (s1, s2) = (v1.sqrt(), v2.sqrt());
            let lo = (m1 - NORMAL_SPAN_SD * s1).min(m2 - NORMAL_SPAN_SD * s2);
            let hi = (m1 + NORMAL_SPAN_SD * s1).max(m2 + NORMAL_SPAN_SD * s2);
            let step = s1.min(s2) / 100.0;
            let n = (((hi - lo) / step).ceil() as usize).clamp(2400, 400_000);
            quad::trapezoid_fn(|x| g(p.log_pdf(x), q.log_pdf(x)), lo, hi, n)
        }
        Space::PositiveReal => {
            let a = p.mean();
            let b = q.mean();
            let hi = 36.0 * a.max(b);
            let step = a.min(b) / 400.0;
            let n = ((hi / step).ceil() as usize).clamp(4000, 400_000);
            quad::simpson(|x| g(p.log_pdf(x), q.log_pdf(x)), 0.0, hi, n)
        }
        Space::Counts => {
            let top = poisson_tail_point(p.mean()).max(poisson_tail_point(q.mean()));
            (0..=top).map(|x| g(p.log_pdf(x as f64), q.log_pdf(x as f64))).sum()
        }
        Space::Binary => g(p.log_pdf(0.0), q.log_pdf(0.0)) + g(p.log_pdf(1.0), q.log_pdf(1.0)),
        Space::Tabulated => {
            let Density::Grid { abscissas, ordinates: f } = p else { unreachable!() };
            let Density::Grid { ordinates: h, .. } = q else { unreachable!() };
            let y: Vec<f64> = f.iter().zip(h).map(|(a, b)| g(a.ln(), b.ln())).collect();
            if y.iter().any(|v| v.is_infinite()) {
                return Ok(f64::INFINITY);
            }
            quad::trapezoid(abscissas, &y)
        }
    })
}

fn hellinger_integrand(lp: f64, lq: f64) -> f64 {
    ((0.5 * lp).exp() - (0.5 * lq).exp()).powi(2)
}

fn kl_integrand(lp: f64, lq: f64) -> f64 {
    if lp == f64::NEG_INFINITY {
        0.0
    } else if lq == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        lp.exp() * (lp - lq)
    }
}

/// Squared Hellinger distance `∫(√p − √q)²`, in `[0, 2]`.
pub fn hellinger_sq(p: &Density, q: &Density) -> Result<f64> {
    check_compatible(p, q)?;
    let h = match (p, q) {
        (Density::Poisson { mean: a }, Density::Poisson { mean: b }) => {
            2.0 * (1.0 - (-(a.sqrt() - b.sqrt()).powi(2) / 2.0).exp())
        }
        (Density::Bernoulli { p: a }, Density::Bernoulli { p: b }) => {
            (a.sqrt() - b.sqrt()).powi(2) + ((1.0 - a).sqrt() - (1.0 - b).sqrt()).powi(2)
        }
        (Density::Exponential { mean: a }, Density::Exponential { mean: b }) => {
            2.0 * (a.sqrt() - b.sqrt()).powi(2) / (a + b)
        }
        (Density::Grid { .. }, _) => return hellinger_sq_numeric(p, q),
        _ => {
            let (m1, v1) = p.normal_params().unwrap();
            let (m2, v2) = q.normal_params().unwrap();
            let s = v1 + v2;
            let affinity = (2.0 * (v1 * v2).sqrt() / s).sqrt() * (-(m1 - m2).powi(2) / (4.0 * s)).exp();
            2.0 * (1.0 - affinity)
        }
    };
    Ok(h.clamp(0.0, 2.0))
}

pub fn hellinger(p: &Density, q: &Density) -> Result<f64> {
    hellinger_sq(p, q).map(f64::sqrt)
}

/// [`hellinger_sq`] by direct integration.
pub fn hellinger_sq_numeric(p: &Density, q: &Density) -> Result<f64> {
    pair_integral(p, q, hellinger_integrand).map(|v| v.clamp(0.0, 2.0))
}

/// Kullback-Leibler divergence `∫ p log(p/q)`.
///
/// When `p` charges a set where `q` vanishes the result is
/// `f64::INFINITY`, never an error.
pub fn kl(p: &Density, q: &Density) -> Result<f64> {
    check_compatible(p, q)?;
    let v = match (p, q) {
        (Density::Poisson { mean: a }, Density::Poisson { mean: b }) => a * (a / b).ln() + b - a,
        (Density::Bernoulli { p: a }, Density::Bernoulli { p: b }) => {
            kl_integrand(a.ln(), b.ln()) + kl_integrand((1.0 - a).ln(), (1.0 - b).ln())
        }
        (Density::Exponential { mean: a }, Density::Exponential { mean: b }) => (b / a).ln() + a / b - 1.0,
        (Density::Grid { .. }, _) => return kl_numeric(p, q),
        _ => {
            let (m1, v1) = p.normal_params().unwrap();
            let (m2, v2) = q.normal_params().unwrap();
            0.5 * (v2 / v1).ln() + (v1 + (m1 - m2).powi(2)) / (2.0 * v2) - 0.5
        }
    };
    Ok(v.max(0.0))
}

/// [`kl`] by direct integration.
pub fn kl_numeric(p: &Density, q: &Density) -> Result<f64> {
    pair_integral(p, q, kl_integrand)
}

/// `∫ p |log(p/q)|^k`.
pub fn v_k(p: &Density, q: &Density, k: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(invalid("moment order k must be at least 1"));
    }
    pair_integral(p, q, |lp, lq| {
        if lp == f64::NEG_INFINITY {
            0.0
        } else if lq == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            lp.exp() * (lp - lq).abs().powf(k)
        }
    })
}

/// Centered moment `∫ p |log(p/q) − K(p, q)|^k`.
pub fn v_k0(p: &Density, q: &Density, k: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(invalid("moment order k must be at least 1"));
    }
    let center = kl(p, q)?;
    if center.is_infinite() {
        return Ok(f64::INFINITY);
    }
    pair_integral(p, q, |lp, lq| {
        if lp == f64::NEG_INFINITY {
            0.0
        } else {
            lp.exp() * (lp - lq - center).abs().powf(k)
        }
    })
}

/// Root average squared Hellinger distance over paired component laws,
/// the distance `d_n` of an independent non-identically distributed
/// experiment.
pub fn avg_hellinger_dn(pairs: &[(Density, Density)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(invalid("no component pairs"));
    }
    let mut s = 0.0;
    for (p, q) in pairs {
        s += hellinger_sq(p, q)?;
    }
    Ok((s / pairs.len() as f64).sqrt())
}

/// Whether the averaged divergences place a parameter in the
/// Kullback-Leibler neighbourhood of radius `eps`: mean of `k_list` and
/// mean of `v_list` both at most `eps²`.
pub fn neighborhood_check(k_list: &[f64], v_list: &[f64], eps: f64) -> Result<bool> {
    if k_list.len() != v_list.len() {
        return Err(invalid(format!(
            "divergence lists differ in length: {} vs {}",
            k_list.len(),
            v_list.len()
        )));
    }
    if k_list.is_empty() {
        return Err(invalid("empty divergence lists"));
    }
    let n = k_list.len() as f64;
    let e2 = eps * eps;
    Ok(k_list.iter().sum::<f64>() / n <= e2 && v_list.iter().sum::<f64>() / n <= e2)
}

/// Divergence selector for the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Hellinger2,
    Kl,
    V2,
    V20,
}

impl Measure {
    pub fn evaluate(self, p: &Density, q: &Density) -> Result<f64> {
        match self {
            Measure::Hellinger2 => hellinger_sq(p, q),
            Measure::Kl => kl(p, q),
            Measure::V2 => v_k(p, q, 2.0),
            Measure::V20 => v_k0(p, q, 2.0),
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hellinger2" => Ok(Measure::Hellinger2),
            "kl" => Ok(Measure::Kl),
            "v2" => Ok(Measure::V2),
            "v20" => Ok(Measure::V20),
            other => Err(invalid(format!("unknown measure {other:?}"))),
        }
    }
}
