//! Shortest paths on the 5x5 grid with two planted routes whose ranking
//! flips with one context feature.

use pgopt::datagen::{derive_seed, gen_planted_path, planted_f_star, sample_bstar, NoiseSpec};
use pgopt::experiments::{Benchmark, RegretBench};
use pgopt::oracle::OracleSpec;
use pgopt::train::{pipeline, Method, TrainConfig};

fn main() -> pgopt::Result<()> {
    let bstar_seed = 2024;
    let oracle = OracleSpec::grid5();
    let noise = NoiseSpec::add_gaussian();

    let bstar = sample_bstar(bstar_seed);
    for x6 in [0.25, 1.5] {
        let x = [0.0, 0.0, 0.0, 0.0, 0.0, x6];
        let path = oracle.solve(&planted_f_star(&bstar, &x))?;
        println!("x6 = {x6}: optimal expected path cost {:.2}", path.value);
    }

    let config = TrainConfig::default();
    let data = gen_planted_path(800 + config.val_size, noise, derive_seed(1, 0), bstar_seed)?;
    let test = gen_planted_path(5_000, noise, derive_seed(1, 1), bstar_seed)?;
    let bench = RegretBench::new(test, &oracle, Benchmark::FStar)?;
    for method in [Method::Eto, Method::SpoPlus, Method::Pgb, Method::Pgc] {
        let r = pipeline(&data, method, &oracle, &config)?;
        println!("{:<9} regret {:.5}", method.as_str(), bench.normalized_excess_regret(&r.best_model, &oracle)?);
    }
    Ok(())
}
