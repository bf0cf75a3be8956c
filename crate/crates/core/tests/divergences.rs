use postrate::divergences::{hellinger_sq, hellinger_sq_numeric, kl, kl_numeric, v_k0, Density};
use postrate::rng::rng_from_seed;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = (Density, Density)> {
    prop_oneof![
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| (Density::normal_location(a), Density::normal_location(b))),
        (-2.0..2.0f64, 0.3..3.0f64, -2.0..2.0f64, 0.3..3.0f64)
            .prop_map(|(a, s, b, t)| (Density::normal(a, s).unwrap(), Density::normal(b, t).unwrap())),
        (0.1..20.0f64, 0.1..20.0f64).prop_map(|(a, b)| (Density::poisson(a).unwrap(), Density::poisson(b).unwrap())),
        (0.01..0.99f64, 0.01..0.99f64).prop_map(|(a, b)| (Density::bernoulli(a).unwrap(), Density::bernoulli(b).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hellinger_symmetric_nonnegative((p, q) in family()) {
        let a = hellinger_sq(&p, &q).unwrap();
        let b = hellinger_sq(&q, &p).unwrap();
        prop_assert!(a >= 0.0 && a <= 2.0);
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_match_quadrature((p, q) in family()) {
        prop_assert!((hellinger_sq(&p, &q).unwrap() - hellinger_sq_numeric(&p, &q).unwrap()).abs() < 1e-8);
        prop_assert!((kl(&p, &q).unwrap() - kl_numeric(&p, &q).unwrap()).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hellinger_triangle_inequality(a in 0.1..15.0f64, b in 0.1..15.0f64, c in 0.1..15.0f64, m in -2.0..2.0f64, s in -2.0..2.0f64) {
        let h = |x: &Density, y: &Density| hellinger_sq(x, y).unwrap().sqrt();
        let (p, q, r) = (Density::poisson(a).unwrap(), Density::poisson(b).unwrap(), Density::poisson(c).unwrap());
        prop_assert!(h(&p, &r) <= h(&p, &q) + h(&q, &r) + 1e-10);
        let (p, q, r) = (Density::normal_location(m), Density::normal_location(s), Density::normal_location(m + s));
        prop_assert!(h(&p, &r) <= h(&p, &q) + h(&q, &r) + 1e-10);
    }
}

/// Sample variance of log(p/q) under 10^6 draws from p, with the standard
/// error of a sample variance.
fn mc_variance(p: &Density, q: &Density, seed: u64) -> (f64, f64) {
    let mut rng = rng_from_seed(seed);
    let n = 1_000_000;
    let l: Vec<f64> = (0..n)
        .map(|_| {
            let x = p.sample(&mut rng).unwrap();
            p.log_pdf(x) - q.log_pdf(x)
        })
        .collect();
    let m = l.iter().sum::<f64>() / n as f64;
    let var = l.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    let m4 = l.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n as f64;
    (var, ((m4 - var * var) / n as f64).sqrt())
}

#[test]
fn centered_second_moment_is_log_ratio_variance() {
    let cases = [
        (Density::normal_location(0.0), Density::normal_location(0.7)),
        (Density::normal(0.0, 1.0).unwrap(), Density::normal(0.5, 2.0).unwrap()),
        (Density::poisson(3.0).unwrap(), Density::poisson(4.5).unwrap()),
        (Density::bernoulli(0.3).unwrap(), Density::bernoulli(0.55).unwrap()),
    ];
    for (i, (p, q)) in cases.iter().enumerate() {
        let exact = v_k0(p, q, 2.0).unwrap();
        let (mc, se) = mc_variance(p, q, 40 + i as u64);
        assert!((mc - exact).abs() <= 4.0 * se, "{}: exact {exact}, MC {mc} +- {se}", p.family());
    }
}

#[test]
fn infinite_kl_is_a_value() {
    let p = Density::bernoulli(0.5).unwrap();
    let q = Density::Bernoulli { p: 0.0 };
    assert_eq!(kl(&p, &q).unwrap(), f64::INFINITY);
}
