//! Backward, central and forward differences compared on a one-parameter
//! class `f(x) = -0.1 x + beta`: where does each empirical surrogate put
//! its minimum, and what does that choice cost in decision loss?

use pgopt::datagen::gen_simple_misspec;
use pgopt::experiments::{intercept_grid, scan_intercepts};
use pgopt::losses::LossKind;
use pgopt::oracle::OracleSpec;

fn main() -> pgopt::Result<()> {
    let oracle = OracleSpec::binary();
    let data = gen_simple_misspec(200, 0.0, 1.0, 3)?;
    let big = gen_simple_misspec(100_000, 0.0, 1.0, 4)?;
    let grid = intercept_grid(-1.0, 1.0, 0.01);
    let h = 0.5;

    let truth = scan_intercepts(&big, LossKind::Decision, &oracle, -0.1, &grid)?;
    println!("population decision loss is lowest at beta = {:.2}", truth.argmin);
    for kind in [LossKind::Decision, LossKind::pgb(h)?, LossKind::pgc(h)?, LossKind::pgf(h)?] {
        let scan = scan_intercepts(&data, kind, &oracle, -0.1, &grid)?;
        let at = grid.iter().position(|b| *b == scan.argmin).unwrap();
        println!(
            "{:<9} argmin beta = {:>5.2}  surrogate {:>8.4}  population decision loss there {:>8.4}",
            kind.name(),
            scan.argmin,
            scan.values[at],
            truth.values[at]
        );
    }
    Ok(())
}
