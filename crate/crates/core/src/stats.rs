//! Small descriptive statistics shared by the simulators.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance; zero for fewer than two points.
pub fn variance(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn std_error(x: &[f64]) -> f64 {
    (variance(x) / x.len() as f64).sqrt()
}

/// Standard error of the unbiased sample variance, from the fourth
/// central moment.
pub fn variance_std_error(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = mean(x);
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
}

/// Frequency of `true` and its binomial standard error.
pub fn proportion(hits: usize, total: usize) -> (f64, f64) {
    let p = hits as f64 / total as f64;
    (p, (p * (1.0 - p) / total as f64).sqrt())
}

/// Linear-interpolation quantile of unsorted data (type 7).
pub fn quantile(x: &[f64], q: f64) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, q)
}

pub fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    let h = (v.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

pub fn median(x: &[f64]) -> f64 {
    quantile(x, 0.5)
}

/// Smallest value whose cumulative normalized weight reaches `q`.
pub fn weighted_quantile(x: &[f64], w: &[f64], q: f64) -> f64 {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let total: f64 = w.iter().sum();
    let mut acc = 0.0;
    for &i in &idx {
        acc += w[i] / total;
        if acc >= q - 1e-12 {
            return x[i];
        }
    }
    x[*idx.last().unwrap()]
}

/// Kish effective sample size of unnormalized weights.
pub fn effective_sample_size(w: &[f64]) -> f64 {
    let s: f64 = w.iter().sum();
    let s2: f64 = w.iter().map(|v| v * v).sum();
    s * s / s2
}

pub fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Normalize log-weights into probabilities.
pub fn softmax(logw: &[f64]) -> Vec<f64> {
    let z = log_sum_exp(logw);
    logw.iter().map(|v| (v - z).exp()).collect()
}

pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper tail `1 - Phi(x)` without cancellation.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

pub fn norm_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous cdf and
/// its asymptotic p-value.
pub fn ks_test(x: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &xi) in v.iter().enumerate() {
        let f = cdf(xi);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    (d, kolmogorov_sf(d * n.sqrt()))
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_sf(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..200 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * t * t).exp();
        s += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// Ordinary least squares with an intercept column prepended.
///
/// Returns `(coefficients, residual_rms)`; coefficient 0 is the intercept.
pub fn ols(y: &[f64], columns: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
    let n = y.len();
    let p = columns.len() + 1;
    if n < p {
        return Err(invalid(format!("{n} points cannot fit {p} coefficients")));
    }
    let x = nalgebra::DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] });
    let yv = nalgebra::DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let beta = svd
        .solve(&yv, 1e-12)
        .map_err(|e| crate::Error::Numerical(e.to_string()))?;
    let resid = &yv - &x * &beta;
    let rms = (resid.norm_squared() / n as f64).sqrt();
    Ok((beta.iter().cloned().collect(), rms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_interpolates() {
        let x = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(quantile(&x, 0.0), 1.0);
        assert_eq!(quantile(&x, 1.0), 4.0);
        assert!((quantile(&x, 0.5) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn weighted_quantile_matches_unweighted_steps() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let w = [1.0; 4];
        assert_eq!(weighted_quantile(&x, &w, 0.5), 2.0);
        assert_eq!(weighted_quantile(&x, &w, 0.9), 4.0);
        assert_eq!(weighted_quantile(&x, &[0.0, 0.0, 0.0, 1.0], 0.1), 4.0);
    }

    #[test]
    fn ess_bounds() {
        assert!((effective_sample_size(&[1.0; 10]) - 10.0).abs() < 1e-12);
        assert!((effective_sample_size(&[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_tails() {
        assert!((norm_sf(2.0) - 0.022_750_131_948_179_2).abs() < 1e-16);
        assert!((norm_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((norm_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-9);
    }

    #[test]
    fn ols_recovers_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let (b, rms) = ols(&y, &[x]).unwrap();
        assert!((b[0] - 2.0).abs() < 1e-12 && (b[1] + 0.5).abs() < 1e-12 && rms < 1e-12);
    }

    #[test]
    fn kolmogorov_tail_value() {
        // Known value of the Kolmogorov survival function at 1.36.
        assert!((kolmogorov_sf(1.36) - 0.0494).abs() < 5e-4);
    }
}
