//! Full experiment from a JSON config: replicate radii, CSV, rate fit and
//! verdict.
//!
//! ```text
//! cargo run --release --example rate_experiment -- crates/core/examples/configs/spline_regression.json
//! ```

use postrate::harness::{report, run_experiment, write_csv, ExperimentSpec, RunOptions};

fn main() -> postrate::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/white_noise.json").to_string());
    let spec = ExperimentSpec::from_json_file(&path)?;
    let rows = run_experiment(&spec, RunOptions::default())?;
    let out = std::env::temp_dir().join(format!("{}-results.csv", spec.model));
    write_csv(&rows, &out)?;
    println!("{} rows written to {}", rows.len(), out.display());

    let rep = report(&rows, &spec.model, &spec.model_config, Some(spec.tolerance()))?;
    for s in &rep.sizes {
        println!("n = {:>6}: median radius {:.4}", s.n, s.median_radius);
    }
    println!(
        "exponent {:.4} [{:.4}, {:.4}] vs theory {:.4} +- {}: {}",
        rep.fit.exponent, rep.fit.ci_lo, rep.fit.ci_hi, rep.theory.exponent, rep.tolerance, rep.verdict
    );
    if let Some(note) = rep.note {
        println!("note: {note}");
    }
    Ok(())
}
