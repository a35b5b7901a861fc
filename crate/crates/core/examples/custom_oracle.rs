//! Any solver for `min_z t'z` can back the PG losses. Here the feasible set
//! is an explicit list of three routes over four edges, and PGB is trained
//! directly against it.

use pgopt::datagen::Dataset;
use pgopt::experiments::{Benchmark, RegretBench};
use pgopt::model::LinearModel;
use pgopt::oracle::OracleSpec;
use pgopt::losses::LossKind;
use pgopt::train::{fit, fit_eto, select_h, HGrid, PgKind, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn routes() -> OracleSpec {
    OracleSpec::enumerated(vec![
        vec![1.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 1.0],
        vec![1.0, 0.0, 0.0, 1.0],
    ])
    .expect("nonempty route list")
}

/// Edge costs depend on one feature nonlinearly; the multiplicative noise
/// `0.5 + 2u^3` is skewed with mean one.
fn sample(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut x, mut y, mut f) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let s: f64 = rng.random_range(0.0..1.0);
        let mean = vec![1.0 + s * s, 1.0, 1.5 - s, 0.8 + 0.5 * (6.0 * s).sin().abs()];
        let cost: Vec<f64> = mean.iter().map(|m| m * (0.5 + rng.random_range(0.0f64..1.0).powi(3) * 2.0)).collect();
        x.push(vec![s]);
        y.push(cost);
        f.push(mean);
    }
    Dataset::new(x, y, Some(f)).expect("rows line up")
}

fn main() -> pgopt::Result<()> {
    let oracle = routes();
    let (train, val) = sample(700, 1).split_tail(200)?;
    let bench = RegretBench::new(sample(5_000, 2), &oracle, Benchmark::FStar)?;

    let eto = fit_eto(&train)?;
    let config = TrainConfig {
        h_grid: HGrid::Values(vec![0.05, 0.2, 0.8]),
        ..TrainConfig::default()
    };
    let pg = select_h(&train, &val, PgKind::Pgb, &oracle, &config, &eto)?;
    let spo = fit(&train, &val, LossKind::SpoPlus, &oracle, &config, &LinearModel::zeros(4, 1))?;
    println!("eto      regret {:.4}", bench.normalized_excess_regret(&eto, &oracle)?);
    println!("spo-plus regret {:.4}", bench.normalized_excess_regret(&spo.best_model, &oracle)?);
    println!(
        "pgb      regret {:.4} (h = {:?}, started from the least-squares fit)",
        bench.normalized_excess_regret(&pg.best_model, &oracle)?,
        pg.chosen_h
    );
    Ok(())
}
