//! Solving `min_z t'z` with each built-in feasible region.

use pgopt::oracle::{down_arc, right_arc, OracleSpec};

fn main() -> pgopt::Result<()> {
    let binary = OracleSpec::Binary { dim: 3 };
    let s = binary.solve(&[0.4, -1.2, 0.0])?;
    println!("binary      z = {:?}  V = {}", s.decision, s.value);

    let s = OracleSpec::Interval.solve(&[0.7])?;
    println!("interval    z = {:?}  V = {}", s.decision, s.value);

    // all arcs cost 1 except a cheap corridor down the first column
    let grid = OracleSpec::grid5();
    let mut t = vec![1.0; 40];
    for r in 0..4 {
        t[down_arc(5, r, 0)] = 0.1;
    }
    let s = grid.solve(&t)?;
    let right: Vec<(usize, usize)> = (0..5)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .filter(|&(r, c)| s.decision[right_arc(5, r, c)] == 1.0)
        .collect();
    println!("grid path   V = {:.2}, right moves at {:?}", s.value, right);

    let simplex = OracleSpec::capped_simplex(6, 0.3)?;
    let s = simplex.solve(&[-0.02, 0.01, -0.05, 0.0, -0.03, 0.04])?;
    println!("simplex     z = {:?}  V = {:.4}", s.decision, s.value);

    let custom = OracleSpec::enumerated(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]])?;
    let s = custom.solve(&[0.3, 0.2])?;
    println!("enumerated  z = {:?}  V = {}", s.decision, s.value);

    for o in [binary, OracleSpec::Interval, grid, simplex, custom] {
        println!("B = {:.4} for {o:?}", o.diameter_bound());
    }
    Ok(())
}
