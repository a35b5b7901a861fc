//! PGB on the planted-path problem at several fixed step sizes, with no
//! selection across h.

use pgopt::experiments::{Experiment, ExperimentConfig, ExperimentName};

fn main() -> pgopt::Result<()> {
    let mut config = ExperimentConfig::preset(ExperimentName::HSensitivity);
    config.trials = 4;
    config.test_size = 5_000;
    let rows = Experiment::new(config.clone())?.run(None)?;
    for h in &config.h_values {
        let r: Vec<f64> = rows.iter().filter(|r| r.chosen_h == Some(*h)).map(|r| r.regret).collect();
        println!("h = {h:<6} mean regret {:.5} over {} trials", r.iter().sum::<f64>() / r.len() as f64, r.len());
    }
    Ok(())
}
