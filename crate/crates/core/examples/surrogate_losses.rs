//! Decision loss and its surrogates as the prediction `t` sweeps across the
//! decision boundary of the binary problem, for one realized cost `y = -1`.

use pgopt::losses::LossKind;
use pgopt::oracle::OracleSpec;

fn main() -> pgopt::Result<()> {
    let oracle = OracleSpec::binary();
    let y = [-1.0];
    let h = 0.5;
    let kinds = [
        LossKind::Decision,
        LossKind::pgb(h)?,
        LossKind::pgc(h)?,
        LossKind::pgf(h)?,
        LossKind::SpoPlus,
        LossKind::Mse,
    ];
    print!("{:>6}", "t");
    for k in &kinds {
        print!("{:>10}", k.name());
    }
    println!();
    for i in -8..=8 {
        let t = [i as f64 * 0.125];
        print!("{:>6.3}", t[0]);
        for k in &kinds {
            // adding 0.0 turns -0.0 into 0.0 for printing
            print!("{:>10.4}", k.evaluate(&oracle, &t, &y)?.value + 0.0);
        }
        println!();
    }
    let g = LossKind::pgb(h)?.evaluate(&oracle, &[0.25], &y)?;
    println!("\nPGB gradient at t = 0.25: {:?}", g.grad_t);
    Ok(())
}
