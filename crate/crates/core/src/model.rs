//! Linear hypothesis `f(x) = W x + b` and its Adam optimizer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

/// Serialized as a flat object `{d, p, W, b}` with `W` row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub d: usize,
    pub p: usize,
    #[serde(rename = "W")]
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

/// Parameter gradient with the same layout as [`LinearModel`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParamGrad {
    pub dw: Vec<f64>,
    pub db: Vec<f64>,
}

impl ParamGrad {
    pub fn zeros(d: usize, p: usize) -> Self {
        ParamGrad {
            dw: vec![0.0; d * p],
            db: vec![0.0; d],
        }
    }

    /// Accumulate `scale * outer(grad_t, x)` into this gradient.
    pub fn accumulate(&mut self, grad_t: &[f64], x: &[f64], scale: f64) {
        let p = x.len();
        for (i, &g) in grad_t.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let g = g * scale;
            self.db[i] += g;
            for (w, &xj) in self.dw[i * p..(i + 1) * p].iter_mut().zip(x) {
                *w += g * xj;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitScheme {
    Zeros,
    Gaussian { sigma: f64 },
    CopyOf(LinearModel),
}

impl InitScheme {
    pub fn gaussian() -> Self {
        InitScheme::Gaussian { sigma: 0.01 }
    }
}

impl LinearModel {
    pub fn zeros(d: usize, p: usize) -> Self {
        LinearModel {
            d,
            p,
            w: vec![0.0; d * p],
            b: vec![0.0; d],
        }
    }

    pub fn new(d: usize, p: usize, w: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if w.len() != d * p {
            return Err(Error::DimensionMismatch { expected: d * p, got: w.len() });
        }
        if b.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: b.len() });
        }
        if w.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("model entries must be finite".into()));
        }
        Ok(LinearModel { d, p, w, b })
    }

    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.w[row * self.p + col]
    }

    /// `W x + b`.
    pub fn predict(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.p);
        self.b
            .iter()
            .enumerate()
            .map(|(i, &bi)| {
                let row = &self.w[i * self.p..(i + 1) * self.p];
                bi + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().chain(&self.b).all(|v| v.is_finite())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: LinearModel = serde_json::from_str(s)?;
        LinearModel::new(m.d, m.p, m.w, m.b)
    }
}

/// Chain rule through the linear map: `dW = grad_t x'`, `db = grad_t`.
pub fn param_grad(grad_t: &[f64], x: &[f64]) -> ParamGrad {
    let mut g = ParamGrad::zeros(grad_t.len(), x.len());
    g.accumulate(grad_t, x, 1.0);
    g
}

pub fn init(p: usize, d: usize, scheme: &InitScheme, seed: u64) -> Result<LinearModel> {
    match scheme {
        InitScheme::Zeros => Ok(LinearModel::zeros(d, p)),
        InitScheme::Gaussian { sigma } => {
            let normal = Normal::new(0.0, *sigma)
                .map_err(|e| Error::InvalidParameter(format!("gaussian init: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = (0..d * p).map(|_| normal.sample(&mut rng)).collect();
            let b = (0..d).map(|_| normal.sample(&mut rng)).collect();
            Ok(LinearModel { d, p, w, b })
        }
        InitScheme::CopyOf(other) => {
            if other.d != d || other.p != p {
                return Err(Error::DimensionMismatch {
                    expected: d * p,
                    got: other.d * other.p,
                });
            }
            Ok(other.clone())
        }
    }
}

/// First and second moment estimates for every parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub m: ParamGrad,
    pub v: ParamGrad,
    pub step: u64,
}

impl AdamState {
    pub fn new(d: usize, p: usize) -> Self {
        AdamState {
            m: ParamGrad::zeros(d, p),
            v: ParamGrad::zeros(d, p),
            step: 0,
        }
    }
}

/// One bias-corrected Adam update with the standard constants.
pub fn adam_step(model: &mut LinearModel, state: &mut AdamState, grad: &ParamGrad, lr: f64) {
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - ADAM_BETA1.powi(t);
    let c2 = 1.0 - ADAM_BETA2.powi(t);

    let update = |params: &mut [f64], m: &mut [f64], v: &mut [f64], g: &[f64]| {
        for (((w, m), v), &g) in params.iter_mut().zip(m).zip(v).zip(g) {
            *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
            *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *w -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
        }
    };
    update(&mut model.w, &mut state.m.dw, &mut state.v.dw, &grad.dw);
    update(&mut model.b, &mut state.m.db, &mut state.v.db, &grad.db);
}
