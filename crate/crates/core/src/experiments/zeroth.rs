//! Empirical surrogate curves over a one-parameter family of intercepts,
//! `f(x) = slope * x + beta`, used to compare the finite-difference schemes.

use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::losses::LossKind;
use crate::oracle::OracleSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct InterceptScan {
    pub intercepts: Vec<f64>,
    /// Mean empirical loss at each intercept.
    pub values: Vec<f64>,
    /// First intercept attaining the minimum.
    pub argmin: f64,
}

/// `lo, lo + step, ...` up to `hi` (inclusive, to within half a step).
pub fn intercept_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 0.5).floor() as usize;
    (0..=count).map(|k| lo + k as f64 * step).collect()
}

pub fn scan_intercepts(
    data: &Dataset,
    loss: LossKind,
    oracle: &OracleSpec,
    slope: f64,
    intercepts: &[f64],
) -> Result<InterceptScan> {
    if data.p() != 1 || data.d() != 1 {
        return Err(Error::InvalidParameter("intercept scan needs scalar contexts and costs".into()));
    }
    if intercepts.is_empty() {
        return Err(Error::InvalidParameter("empty intercept grid".into()));
    }
    let mut values = Vec::with_capacity(intercepts.len());
    for &beta in intercepts {
        let mut total = 0.0;
        for (x, y) in data.x.iter().zip(&data.y) {
            total += loss.evaluate(oracle, &[slope * x[0] + beta], y)?.value;
        }
        values.push(total / data.len() as f64);
    }
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    Ok(InterceptScan {
        argmin: intercepts[best],
        intercepts: intercepts.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_expected_points() {
        let g = intercept_grid(-1.0, 1.0, 0.01);
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], -1.0);
        assert!((g[200] - 1.0).abs() < 1e-12);
        assert!((g[100]).abs() < 1e-12);
    }

    #[test]
    fn decision_scan_picks_sign() {
        // y = -1 everywhere: any negative prediction is optimal
        let ds = Dataset::new(vec![vec![0.0]; 3], vec![vec![-1.0]; 3], None).unwrap();
        let s = scan_intercepts(&ds, LossKind::Decision, &OracleSpec::binary(), 0.0, &[0.5, -0.5, -1.0]).unwrap();
        assert_eq!(s.values, vec![0.0, -1.0, -1.0]);
        assert_eq!(s.argmin, -0.5);
    }
}
