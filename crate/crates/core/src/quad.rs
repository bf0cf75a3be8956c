//! Deterministic quadrature on grids.

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
}

/// Trapezoid rule on arbitrary increasing abscissas.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Trapezoid rule for `f` on `[a, b]` with `n` intervals.
pub fn trapezoid_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + h * i as f64);
    }
    s * h
}

/// Composite Simpson rule for `f` on `[a, b]` with `n` (rounded up to
/// even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Simpson's rule over `[a, b]` split at `breaks`, so integrands with jumps
/// at the break points are integrated piece by piece. Each piece gets a
/// number of intervals proportional to its length, at least `min_per`.
pub fn simpson_piecewise(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    step: f64,
    min_per: usize,
) -> f64 {
    let mut pts: Vec<f64> = breaks.iter().cloned().filter(|&t| t > a && t < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        // Evaluate strictly inside the piece so a jump at an endpoint is not
        // sampled from the wrong side.
        let shrink = (hi - lo) * 1e-12;
        let n = (((hi - lo) / step).ceil() as usize).max(min_per);
        total += simpson(&f, lo + shrink, hi - shrink, n);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_for_cubics() {
        let v = simpson(|x| x * x * x - x, 0.0, 2.0, 2);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_of_gaussian() {
        let v = trapezoid_fn(|x| (-0.5 * x * x).exp(), -12.0, 12.0, 2400);
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn piecewise_handles_jump() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 5.0 };
        let v = simpson_piecewise(f, 0.0, 1.0, &[0.3], 0.01, 2);
        assert!((v - (0.3 + 3.5)).abs() < 1e-10);
    }
}
