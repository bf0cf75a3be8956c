//! Closed-form divergences between members of the exponential families used
//! by the models, checked against their quadrature versions.

use postrate::divergences::{avg_hellinger_dn, hellinger_sq, hellinger_sq_numeric, kl, kl_numeric, v_k0, Density};
use postrate::inid::{hellinger_bernoulli, poisson_generalized_bound, poisson_generalized_hellinger};

fn main() -> postrate::Result<()> {
    let pairs = [
        (Density::normal_location(0.0), Density::normal_location(0.5)),
        (Density::poisson(1.0)?, Density::poisson(2.0)?),
        (Density::bernoulli(0.3)?, Density::bernoulli(0.6)?),
    ];
    println!("{:<12} {:>12} {:>12} {:>12} {:>12} {:>12}", "family", "h2", "h2 (quad)", "kl", "kl (quad)", "v20");
    for (p, q) in &pairs {
        println!(
            "{:<12} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            p.family(),
            hellinger_sq(p, q)?,
            hellinger_sq_numeric(p, q)?,
            kl(p, q)?,
            kl_numeric(p, q)?,
            v_k0(p, q, 2.0)?
        );
    }

    // Average squared Hellinger distance over a product of non-identical laws.
    let design: Vec<(Density, Density)> = (1..=5)
        .map(|i| Ok((Density::poisson(i as f64)?, Density::poisson(i as f64 + 0.5)?)))
        .collect::<postrate::Result<_>>()?;
    println!("d_n over 5 Poisson pairs: {:.6}", avg_hellinger_dn(&design)?);

    // Hellinger-type distance between normalized upper brackets.
    let h = poisson_generalized_hellinger(1.2, 1.0, 1.8, 1.5);
    let b = poisson_generalized_bound(1.2, 1.0, 1.8, 1.5, 1.0, 2.0);
    println!("generalized Poisson: {h:.6} <= bound {b:.6}");
    println!("Bernoulli(0.2) vs Bernoulli(0.25): {:.6}", hellinger_bernoulli(0.2, 0.25));
    Ok(())
}
