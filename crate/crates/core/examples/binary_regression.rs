//! Binary regression with a Dirichlet process mixture link, fitted by prior
//! importance sampling.

use postrate::harness::ContractionModel;
use postrate::inid::BinaryDpModel;

fn main() -> postrate::Result<()> {
    let model = BinaryDpModel::default();
    for n in [50, 150, 450] {
        let rep = model.replicate(n, 9, 20_000, 0.5, &[])?;
        println!("n = {n:>3}: median posterior d_n {:.4}, ESS {:.0}", rep.radius, rep.ess.unwrap_or(f64::NAN));
    }
    Ok(())
}
