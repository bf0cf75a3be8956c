//! Error probabilities of likelihood ratio tests against their exponential
//! bounds, as estimated by the `tests run` command.

use postrate::hypothesis::{run_suite, Suite};

fn main() -> postrate::Result<()> {
    for suite in [Suite::Lemma5, Suite::Lemma2] {
        for r in run_suite(suite, 20_000, 1)? {
            let two = match (r.type_two, r.type_two_bound) {
                (Some(e), Some(b)) => format!("type II {e:.4} <= {b:.4}"),
                _ => String::new(),
            };
            println!(
                "{:<22} n = {:>3} eps = {:.3}: type I {:.4} <= {:.4}  {two}  [{}]",
                r.label,
                r.n,
                r.eps,
                r.type_one,
                r.type_one_bound,
                if r.within_bounds() { "ok" } else { "exceeds" }
            );
        }
    }
    Ok(())
}
