//! Minibatch Adam training with epoch checkpointing on validation decision
//! loss, step-size selection for the PG losses, and the closed-form
//! estimate-then-optimize baseline.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::losses::{decision_loss, LossKind};
use crate::model::{adam_step, AdamState, LinearModel, ParamGrad};
use crate::oracle::OracleSpec;

const ETO_RIDGE: f64 = 1e-8;

/// Candidate perturbation sizes for the PG losses.
#[derive(Clone, Debug, PartialEq)]
pub enum HGrid {
    /// `{c / sqrt(n) : c in {0.25, 1, 4, 16}} + {0.001}`.
    Auto,
    Values(Vec<f64>),
}

impl HGrid {
    pub fn resolve(&self, n_train: usize) -> Vec<f64> {
        match self {
            HGrid::Auto => {
                let root = (n_train.max(1) as f64).sqrt();
                let mut grid: Vec<f64> = [0.25, 1.0, 4.0, 16.0].iter().map(|c| c / root).collect();
                grid.push(0.001);
                grid
            }
            HGrid::Values(v) => v.clone(),
        }
    }
}

impl Serialize for HGrid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HGrid::Auto => s.serialize_str("auto"),
            HGrid::Values(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for HGrid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            Values(Vec<f64>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "auto" => Ok(HGrid::Auto),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "h_grid must be \"auto\" or a list of numbers, got {w:?}"
            ))),
            Raw::Values(v) => Ok(HGrid::Values(v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    pub val_size: usize,
    pub h_grid: HGrid,
    pub seed: u64,
    /// Start the PG losses from the trained SPO+ model.
    pub warm_start: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            batch: 32,
            lr: 0.01,
            val_size: 200,
            h_grid: HGrid::Auto,
            seed: 0,
            warm_start: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidTraining("epochs must be >= 1".into()));
        }
        if self.batch == 0 {
            return Err(Error::InvalidTraining("batch must be >= 1".into()));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidTraining(format!("lr must be positive, got {}", self.lr)));
        }
        if let HGrid::Values(v) = &self.h_grid {
            if let Some(h) = v.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
                return Err(Error::InvalidStep(*h));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    pub best_model: LinearModel,
    /// Parameters after the last epoch.
    pub final_model: LinearModel,
    /// Zero-based index into `val_curve`.
    pub best_epoch: usize,
    pub chosen_h: Option<f64>,
    /// Mean validation decision loss after each epoch.
    pub val_curve: Vec<f64>,
}

impl TrainReport {
    pub fn best_val_loss(&self) -> f64 {
        self.val_curve[self.best_epoch]
    }
}

/// Mean realized cost of the plug-in decisions over a dataset.
pub fn mean_decision_loss(model: &LinearModel, data: &Dataset, oracle: &OracleSpec) -> Result<f64> {
    let mut total = 0.0;
    for (x, y) in data.x.iter().zip(&data.y) {
        total += decision_loss(oracle, &model.predict(x), y)?.value;
    }
    Ok(total / data.len() as f64)
}

fn check_shapes(data: &Dataset, model: &LinearModel) -> Result<()> {
    if data.p() != model.p {
        return Err(Error::DimensionMismatch { expected: model.p, got: data.p() });
    }
    if data.d() != model.d {
        return Err(Error::DimensionMismatch { expected: model.d, got: data.d() });
    }
    Ok(())
}

/// Minibatch Adam on `loss`, keeping the model with the lowest validation
/// decision loss seen after any epoch (first minimum on ties).
pub fn fit(
    train: &Dataset,
    val: &Dataset,
    loss: LossKind,
    oracle: &OracleSpec,
    config: &TrainConfig,
    init_model: &LinearModel,
) -> Result<TrainReport> {
    config.validate()?;
    if loss == LossKind::Decision {
        return Err(Error::InvalidTraining("the decision loss is for evaluation only".into()));
    }
    if let Some(h) = loss.h() {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidStep(h));
        }
    }
    if train.is_empty() {
        return Err(Error::InvalidTraining("empty training set".into()));
    }
    if val.is_empty() {
        return Err(Error::InvalidTraining("empty validation set".into()));
    }
    if config.batch > train.len() {
        return Err(Error::InvalidTraining(format!(
            "batch {} exceeds training size {}",
            config.batch,
            train.len()
        )));
    }
    check_shapes(train, init_model)?;
    check_shapes(val, init_model)?;

    let (d, p) = (init_model.d, init_model.p);
    let mut model = init_model.clone();
    let mut state = AdamState::new(d, p);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut val_curve = Vec::with_capacity(config.epochs);
    let mut best: Option<(usize, f64, LinearModel)> = None;

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch) {
            let mut grad = ParamGrad::zeros(d, p);
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                let t = model.predict(&train.x[i]);
                let eval = loss.evaluate(oracle, &t, &train.y[i])?;
                grad.accumulate(&eval.grad_t, &train.x[i], scale);
            }
            adam_step(&mut model, &mut state, &grad, config.lr);
        }
        if !model.is_finite() {
            return Err(Error::InvalidTraining(format!("parameters diverged in epoch {epoch}")));
        }
        let v = mean_decision_loss(&model, val, oracle)?;
        val_curve.push(v);
        if best.as_ref().is_none_or(|(_, bv, _)| v < *bv) {
            best = Some((epoch, v, model.clone()));
        }
    }

    let (best_epoch, _, best_model) = best.expect("at least one epoch");
    Ok(TrainReport {
        best_model,
        final_model: model,
        best_epoch,
        chosen_h: loss.h(),
        val_curve,
    })
}

/// The three perturbation-gradient losses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PgKind {
    Pgb,
    Pgc,
    Pgf,
}

impl PgKind {
    pub fn with_h(self, h: f64) -> Result<LossKind> {
        match self {
            PgKind::Pgb => LossKind::pgb(h),
            PgKind::Pgc => LossKind::pgc(h),
            PgKind::Pgf => LossKind::pgf(h),
        }
    }
}

/// Runs [`fit`] for every `h` in the grid and keeps the run with the lowest
/// validation decision loss; smaller `h` wins ties.
pub fn select_h(
    train: &Dataset,
    val: &Dataset,
    kind: PgKind,
    oracle: &OracleSpec,
    config: &TrainConfig,
    init_model: &LinearModel,
) -> Result<TrainReport> {
    let mut grid = config.h_grid.resolve(train.len());
    if grid.is_empty() {
        return Err(Error::InvalidTraining("empty h grid".into()));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let reports = grid
        .par_iter()
        .map(|&h| fit(train, val, kind.with_h(h)?, oracle, config, init_model))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.best_val_loss() < reports[best].best_val_loss() {
            best = i;
        }
    }
    Ok(reports.into_iter().nth(best).expect("nonempty grid"))
}

/// Ridge least squares (ridge 1e-8) from `[x, 1]` to each cost coordinate.
pub fn fit_eto(train: &Dataset) -> Result<LinearModel> {
    let n = train.len();
    if n == 0 {
        return Err(Error::InvalidTraining("empty training set".into()));
    }
    let (p, d) = (train.p(), train.d());
    let design = DMatrix::from_fn(n, p + 1, |i, j| if j < p { train.x[i][j] } else { 1.0 });
    let targets = DMatrix::from_fn(n, d, |i, j| train.y[i][j]);
    let gram = design.transpose() * &design + DMatrix::identity(p + 1, p + 1) * ETO_RIDGE;
    let rhs = design.transpose() * targets;
    let coef = gram
        .cholesky()
        .ok_or_else(|| Error::InvalidTraining("normal equations are not positive definite".into()))?
        .solve(&rhs);
    let w = (0..d).flat_map(|i| (0..p).map(move |j| (i, j))).map(|(i, j)| coef[(j, i)]).collect();
    let b = (0..d).map(|i| coef[(p, i)]).collect();
    LinearModel::new(d, p, w, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Eto,
    SpoPlus,
    Pgb,
    Pgc,
    Pgf,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Eto, Method::SpoPlus, Method::Pgb, Method::Pgc, Method::Pgf];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Eto => "eto",
            Method::SpoPlus => "spo-plus",
            Method::Pgb => "pgb",
            Method::Pgc => "pgc",
            Method::Pgf => "pgf",
        }
    }

    pub fn pg_kind(&self) -> Option<PgKind> {
        match self {
            Method::Pgb => Some(PgKind::Pgb),
            Method::Pgc => Some(PgKind::Pgc),
            Method::Pgf => Some(PgKind::Pgf),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?} (expected eto, spo-plus, pgb, pgc or pgf)")))
    }
}

/// Train one method end to end. The last `val_size` rows are held out for
/// validation.
pub fn pipeline(dataset: &Dataset, method: Method, oracle: &OracleSpec, config: &TrainConfig) -> Result<TrainReport> {
    pipeline_with_warm_start(dataset, method, oracle, config, None)
}

/// As [`pipeline`], reusing an already trained SPO+ report as the PG warm
/// start instead of retraining it.
pub fn pipeline_with_warm_start(
    dataset: &Dataset,
    method: Method,
    oracle: &OracleSpec,
    config: &TrainConfig,
    spo_plus: Option<&TrainReport>,
) -> Result<TrainReport> {
    config.validate()?;
    if dataset.len() < config.val_size + config.batch {
        return Err(Error::InvalidTraining(format!(
            "dataset has {} rows, need at least val_size + batch = {}",
            dataset.len(),
            config.val_size + config.batch
        )));
    }
    let (train, val) = dataset.split_tail(config.val_size)?;
    let zeros = LinearModel::zeros(dataset.d(), dataset.p());
    match method {
        Method::Eto => {
            let model = fit_eto(&train)?;
            let v = mean_decision_loss(&model, &val, oracle)?;
            Ok(TrainReport {
                final_model: model.clone(),
                best_model: model,
                best_epoch: 0,
                chosen_h: None,
                val_curve: vec![v],
            })
        }
        Method::SpoPlus => fit(&train, &val, LossKind::SpoPlus, oracle, config, &zeros),
        Method::Pgb | Method::Pgc | Method::Pgf => {
            let kind = method.pg_kind().expect("PG method");
            let init = if config.warm_start {
                match spo_plus {
                    Some(r) => r.best_model.clone(),
                    None => fit(&train, &val, LossKind::SpoPlus, oracle, config, &zeros)?.best_model,
                }
            } else {
                zeros
            };
            select_h(&train, &val, kind, oracle, config, &init)
        }
    }
}
