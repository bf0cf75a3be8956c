//! Exact posterior over a finite sieve of monotone Poisson regression links.

use postrate::harness::ContractionModel;
use postrate::inid::PoissonSieveModel;

fn main() -> postrate::Result<()> {
    let model = PoissonSieveModel::default();
    println!("{:>5} {:>8} {:>8} {:>24}", "n", "eps_n", "radius", "mass beyond eps_n / 2");
    for n in [100, 400, 1600] {
        let eps = model.eps_n(n);
        let rep = model.replicate(n, 5, 1000, 0.9, &[])?;
        let (lo, hi) = model.exact_mass_outside(n, 5, 0.5 * eps)?;
        println!("{n:>5} {eps:>8.4} {:>8.4} {:>11.3e}..{:<11.3e}", rep.radius, lo, hi);
    }
    Ok(())
}
