//! One replication of the binary misspecification study: every method on
//! the same data, scored by normalized excess regret on a fresh test set.
//!
//!     cargo run --release --example train_misspecified -- 500

use pgopt::datagen::gen_simple_misspec;
use pgopt::experiments::{Benchmark, RegretBench};
use pgopt::oracle::OracleSpec;
use pgopt::train::{pipeline, Method, TrainConfig};

fn main() -> pgopt::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let (m, alpha) = (0.0, 1.0);
    let oracle = OracleSpec::binary();
    let config = TrainConfig::default();

    let data = gen_simple_misspec(n + config.val_size, m, alpha, 1)?;
    let bench = RegretBench::new(gen_simple_misspec(10_000, m, alpha, 2)?, &oracle, Benchmark::FStar)?;

    for method in Method::ALL {
        let report = pipeline(&data, method, &oracle, &config)?;
        let model = &report.best_model;
        println!(
            "{:<9} regret {:>8.5}  threshold x = {:>6.3}  h = {:?}",
            method.as_str(),
            bench.normalized_excess_regret(model, &oracle)?,
            -model.b[0] / model.w[0],
            report.chosen_h
        );
    }
    Ok(())
}
