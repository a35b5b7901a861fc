//! Decision loss and the surrogates used to train against it.
//!
//! Every loss reports a value and a gradient with respect to the predicted
//! cost `t`, so the training loop never needs to know which loss it runs.
//! The perturbation-gradient (PG) losses are finite differences of the
//! plug-in value `V(s) = min_z s'z` along the realized cost `y`:
//!
//! | kind | value                              | gradient                              |
//! |------|------------------------------------|---------------------------------------|
//! | PGB  | `(V(t) - V(t - h y)) / h`          | `(z(t) - z(t - h y)) / h`             |
//! | PGC  | `(V(t + h y) - V(t - h y)) / 2h`   | `(z(t + h y) - z(t - h y)) / 2h`      |
//! | PGF  | `(V(t + h y) - V(t)) / h`          | `(z(t + h y) - z(t)) / h`             |
//!
//! Because `V` is concave, PGB over-estimates the decision loss `y'z(t)` and
//! PGF under-estimates it. At a kink the gradient uses the tie-broken
//! decision, which is an element of the Clarke subdifferential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, diff_scaled, dot};
use crate::oracle::OracleSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct LossEval {
    pub value: f64,
    pub grad_t: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum LossKind {
    /// Realized cost of the plug-in decision; evaluation only.
    Decision,
    Pgb { h: f64 },
    Pgc { h: f64 },
    Pgf { h: f64 },
    SpoPlus,
    Mse,
}

impl LossKind {
    pub fn pgb(h: f64) -> Result<Self> {
        check_step(h).map(|h| LossKind::Pgb { h })
    }

    pub fn pgc(h: f64) -> Result<Self> {
        check_step(h).map(|h| LossKind::Pgc { h })
    }

    pub fn pgf(h: f64) -> Result<Self> {
        check_step(h).map(|h| LossKind::Pgf { h })
    }

    pub fn h(&self) -> Option<f64> {
        match self {
            LossKind::Pgb { h } | LossKind::Pgc { h } | LossKind::Pgf { h } => Some(*h),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LossKind::Decision => "decision",
            LossKind::Pgb { .. } => "pgb",
            LossKind::Pgc { .. } => "pgc",
            LossKind::Pgf { .. } => "pgf",
            LossKind::SpoPlus => "spo-plus",
            LossKind::Mse => "mse",
        }
    }

    pub fn evaluate(&self, oracle: &OracleSpec, t: &[f64], y: &[f64]) -> Result<LossEval> {
        match *self {
            LossKind::Decision => decision_loss(oracle, t, y),
            LossKind::Pgb { h } => pgb(oracle, t, y, h),
            LossKind::Pgc { h } => pgc(oracle, t, y, h),
            LossKind::Pgf { h } => pgf(oracle, t, y, h),
            LossKind::SpoPlus => spo_plus(oracle, t, y),
            LossKind::Mse => mse(t, y),
        }
    }
}

fn check_step(h: f64) -> Result<f64> {
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        Err(Error::InvalidStep(h))
    }
}

fn check_pair(t: &[f64], y: &[f64]) -> Result<()> {
    if t.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// `y' z(t)`, with a zero gradient (the loss is piecewise constant in `t`).
pub fn decision_loss(oracle: &OracleSpec, t: &[f64], y: &[f64]) -> Result<LossEval> {
    check_pair(t, y)?;
    let sol = oracle.solve(t)?;
    Ok(LossEval {
        value: dot(y, &sol.decision),
        grad_t: vec![0.0; t.len()],
    })
}

/// Backward-difference PG loss.
pub fn pgb(oracle: &OracleSpec, t: &[f64], y: &[f64], h: f64) -> Result<LossEval> {
    let h = check_step(h)?;
    check_pair(t, y)?;
    let here = oracle.solve(t)?;
    let back = oracle.solve(&add_scaled(t, -h, y))?;
    Ok(LossEval {
        value: (here.value - back.value) / h,
        grad_t: diff_scaled(&here.decision, &back.decision, 1.0 / h),
    })
}

/// Central-difference PG loss.
pub fn pgc(oracle: &OracleSpec, t: &[f64], y: &[f64], h: f64) -> Result<LossEval> {
    let h = check_step(h)?;
    check_pair(t, y)?;
    let fwd = oracle.solve(&add_scaled(t, h, y))?;
    let back = oracle.solve(&add_scaled(t, -h, y))?;
    Ok(LossEval {
        value: (fwd.value - back.value) / (2.0 * h),
        grad_t: diff_scaled(&fwd.decision, &back.decision, 0.5 / h),
    })
}

/// Forward-difference PG loss; an optimistic lower bound on the decision loss.
pub fn pgf(oracle: &OracleSpec, t: &[f64], y: &[f64], h: f64) -> Result<LossEval> {
    let h = check_step(h)?;
    check_pair(t, y)?;
    let fwd = oracle.solve(&add_scaled(t, h, y))?;
    let here = oracle.solve(t)?;
    Ok(LossEval {
        value: (fwd.value - here.value) / h,
        grad_t: diff_scaled(&fwd.decision, &here.decision, 1.0 / h),
    })
}

/// SPO+ surrogate: `-V(2t - y) + 2 t'z(y) - V(y)`, subgradient
/// `2 (z(y) - z(2t - y))`.
pub fn spo_plus(oracle: &OracleSpec, t: &[f64], y: &[f64]) -> Result<LossEval> {
    check_pair(t, y)?;
    let shifted: Vec<f64> = t.iter().zip(y).map(|(a, b)| 2.0 * a - b).collect();
    let at_shift = oracle.solve(&shifted)?;
    let at_truth = oracle.solve(y)?;
    Ok(LossEval {
        value: -at_shift.value + 2.0 * dot(t, &at_truth.decision) - at_truth.value,
        grad_t: diff_scaled(&at_truth.decision, &at_shift.decision, 2.0),
    })
}

/// `0.5 * ||t - y||^2`.
pub fn mse(t: &[f64], y: &[f64]) -> Result<LossEval> {
    check_pair(t, y)?;
    let grad_t: Vec<f64> = t.iter().zip(y).map(|(a, b)| a - b).collect();
    Ok(LossEval {
        value: 0.5 * dot(&grad_t, &grad_t),
        grad_t,
    })
}
