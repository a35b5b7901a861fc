//! Capped-simplex portfolio choice from lagged monthly returns.
//!
//! Pass a CSV of twelve return columns (optionally with a leading date
//! column) to use real data; otherwise a synthetic history is generated.
//!
//!     cargo run --release --example portfolio -- returns.csv

use pgopt::datagen::{gen_portfolio, load_returns_csv, synthetic_returns, ReturnsCsvOptions, PORTFOLIO_ASSETS};
use pgopt::experiments::{Benchmark, RegretBench};
use pgopt::oracle::OracleSpec;
use pgopt::train::{pipeline, Method, TrainConfig};

fn main() -> pgopt::Result<()> {
    let returns = match std::env::args().nth(1) {
        Some(path) => load_returns_csv(path, &ReturnsCsvOptions::default())?,
        None => synthetic_returns(120, 7),
    };
    println!("{} months of returns", returns.len());

    let oracle = OracleSpec::capped_simplex(PORTFOLIO_ASSETS, 0.25)?;
    let config = TrainConfig::default();
    let data = gen_portfolio(&returns, 800 + config.val_size, 0.5, 1)?;
    let bench = RegretBench::new(gen_portfolio(&returns, 5_000, 0.5, 2)?, &oracle, Benchmark::Hindsight)?;

    for method in [Method::Eto, Method::SpoPlus, Method::Pgb, Method::Pgc] {
        let r = pipeline(&data, method, &oracle, &config)?;
        let weights = oracle.solve(&r.best_model.predict(&returns[returns.len() - 1]))?.decision;
        println!(
            "{:<9} regret vs hindsight {:.4}; next-month weights {:?}",
            method.as_str(),
            bench.normalized_excess_regret(&r.best_model, &oracle)?,
            weights.iter().map(|w| (w * 100.0).round() / 100.0).collect::<Vec<_>>()
        );
    }
    Ok(())
}
