use postrate::harness::{read_csv, run_experiment, write_csv, ExperimentSpec, RunOptions, Tolerances};
use postrate::stats::median;
use serde_json::json;

fn spec(model: &str, config: serde_json::Value, grid: Vec<usize>, draws: usize) -> ExperimentSpec {
    ExperimentSpec {
        model: model.into(),
        model_config: config,
        n_grid: grid,
        replicates: 5,
        posterior_draws: draws,
        quantile: 0.9,
        seed: 42,
        tolerances: Tolerances::default(),
    }
}

fn csv_bytes(s: &ExperimentSpec, workers: usize) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    write_csv(&run_experiment(s, RunOptions { workers, record_timing: false }).unwrap(), &path).unwrap();
    std::fs::read(path).unwrap()
}

#[test]
fn rows_cover_the_grid_in_order() {
    let s = spec("white-noise", serde_json::Value::Null, vec![64, 128, 256], 200);
    let rows = run_experiment(&s, RunOptions::default()).unwrap();
    assert_eq!(rows.len(), 15);
    let keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.n, r.replicate)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(rows.iter().all(|r| r.status == "ok" && r.elapsed_ms == 0));
}

#[test]
fn csv_is_byte_identical_across_runs_and_workers() {
    for (model, cfg) in [("white-noise", json!(null)), ("nl-autoregression", json!({ "burn_in": 1000 }))] {
        let s = spec(model, cfg, vec![128, 256, 512], 200);
        let one = csv_bytes(&s, 1);
        assert_eq!(one, csv_bytes(&s, 1));
        assert_eq!(one, csv_bytes(&s, 3));
    }
}

#[test]
fn csv_header_and_round_trip() {
    let s = spec("parametric-grid", json!(null), vec![50, 100, 200], 0);
    let rows = run_experiment(&s, RunOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    write_csv(&rows, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "model,n,replicate,seed,quantile,radius,mass_outside_2eps,mass_outside_5eps,ess,elapsed_ms,status"
    );
    assert_eq!(read_csv(&path).unwrap(), rows);
}

#[test]
fn white_noise_contracts() {
    let mut s = spec("white-noise", json!(null), vec![256, 2048, 16384], 500);
    s.replicates = 15;
    let rows = run_experiment(&s, RunOptions::default()).unwrap();
    let med = |n: usize| median(&rows.iter().filter(|r| r.n == n).map(|r| r.radius.unwrap()).collect::<Vec<f64>>());
    assert!(med(16384) < med(256));
}

#[test]
fn model_errors_become_row_markers() {
    // Prior importance sampling refuses fewer than 10^4 draws.
    let s = spec("binary-dp", json!(null), vec![20, 40, 80], 100);
    let rows = run_experiment(&s, RunOptions::default()).unwrap();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.status.starts_with("error: ") && r.radius.is_none()));
}

#[test]
fn invalid_specs_rejected() {
    let mut s = spec("white-noise", json!(null), vec![64, 128], 100);
    assert!(run_experiment(&s, RunOptions::default()).is_err());
    s.n_grid = vec![64, 64, 128];
    assert!(run_experiment(&s, RunOptions::default()).is_err());
    s.n_grid = vec![64, 128, 256];
    s.replicates = 4;
    assert!(run_experiment(&s, RunOptions::default()).is_err());
    s.replicates = 5;
    s.model_config = json!({ "alpha": 1.0, "bogus": 1 });
    assert!(run_experiment(&s, RunOptions::default()).is_err());
    s.model = "unknown".into();
    assert!(run_experiment(&s, RunOptions::default()).is_err());
}

#[test]
fn example_configs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let s = ExperimentSpec::from_json_file(&path).unwrap();
        s.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
