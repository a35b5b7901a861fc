//! Drive a Monte-Carlo experiment from a TOML config and write
//! `results.csv` plus `summary.json`.
//!
//!     cargo run --release --example run_experiment -- examples/configs/shortest_planted.toml out/

use std::path::PathBuf;

use pgopt::experiments::{run_experiment, ExperimentConfig};

fn main() -> pgopt::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = match args.next() {
        Some(path) => ExperimentConfig::from_toml_file(path)?,
        None => ExperimentConfig::from_toml_str(
            r#"
            experiment = "simple-misspec"
            methods = ["eto", "spo-plus", "pgc"]
            n = [100, 400]
            trials = 4
            test_size = 2000
            "#,
        )?,
    };
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("pgopt-example"));
    let out = run_experiment(&config, &out_dir, None)?;
    for r in &out.summary.reports {
        println!("{:<9} n = {:<5} mean {:.5} +/- {:.5}", r.method, r.n, r.mean, r.ci95);
    }
    println!("wrote {}", out.results_csv.display());
    Ok(())
}
