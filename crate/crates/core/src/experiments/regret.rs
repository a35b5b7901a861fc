use serde::{Deserialize, Serialize};

use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, mean, sample_std};
use crate::model::LinearModel;
use crate::oracle::OracleSpec;

/// What the learned policy is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Benchmark {
    /// Plug-in decisions at the true conditional mean `f*(x)`.
    FStar,
    /// Per-sample full-information decisions `argmin_z y'z`.
    Hindsight,
}

/// A test set with its benchmark costs precomputed, so many models can be
/// scored against it cheaply.
#[derive(Clone, Debug)]
pub struct RegretBench {
    pub data: Dataset,
    pub benchmark: Benchmark,
    reference_cost: f64,
}

impl RegretBench {
    pub fn new(data: Dataset, oracle: &OracleSpec, benchmark: Benchmark) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidParameter("empty test set".into()));
        }
        let mut total = 0.0;
        for i in 0..data.len() {
            let target = match benchmark {
                Benchmark::FStar => {
                    let f = data.f_star.as_ref().ok_or_else(|| {
                        Error::InvalidParameter("f-star benchmark needs a dataset with true means".into())
                    })?;
                    &f[i]
                }
                Benchmark::Hindsight => &data.y[i],
            };
            total += dot(&data.y[i], &oracle.solve(target)?.decision);
        }
        let reference_cost = total / data.len() as f64;
        if reference_cost == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(RegretBench {
            data,
            benchmark,
            reference_cost,
        })
    }

    /// Mean realized cost of the benchmark policy.
    pub fn reference_cost(&self) -> f64 {
        self.reference_cost
    }

    /// `(mean_i y_i'z(f(x_i)) - reference) / |reference|`.
    pub fn normalized_excess_regret(&self, model: &LinearModel, oracle: &OracleSpec) -> Result<f64> {
        let mut total = 0.0;
        for (x, y) in self.data.x.iter().zip(&self.data.y) {
            total += dot(y, &oracle.solve(&model.predict(x))?.decision);
        }
        let cost = total / self.data.len() as f64;
        Ok((cost - self.reference_cost) / self.reference_cost.abs())
    }
}

pub fn normalized_excess_regret(
    model: &LinearModel,
    test: &Dataset,
    oracle: &OracleSpec,
    benchmark: Benchmark,
) -> Result<f64> {
    RegretBench::new(test.clone(), oracle, benchmark)?.normalized_excess_regret(model, oracle)
}

/// Aggregate of one `(method, n[, h])` cell over trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub method: String,
    pub n: usize,
    /// Set only for fixed-step experiments.
    pub h: Option<f64>,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    /// `1.96 * std / sqrt(trials)`.
    pub ci95: f64,
}

impl RegretReport {
    pub fn from_samples(method: impl Into<String>, n: usize, h: Option<f64>, regrets: &[f64]) -> Self {
        let std = sample_std(regrets);
        RegretReport {
            method: method.into(),
            n,
            h,
            trials: regrets.len(),
            mean: mean(regrets),
            std,
            ci95: 1.96 * std / (regrets.len() as f64).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_model(c: f64) -> LinearModel {
        LinearModel::new(1, 1, vec![0.0], vec![c]).unwrap()
    }

    #[test]
    fn opposite_decision_has_unit_regret() {
        let ds = Dataset::new(vec![vec![0.3]; 4], vec![vec![-1.0]; 4], Some(vec![vec![-1.0]; 4])).unwrap();
        let o = OracleSpec::binary();
        let r = normalized_excess_regret(&constant_model(1.0), &ds, &o, Benchmark::FStar).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        let r = normalized_excess_regret(&constant_model(-1.0), &ds, &o, Benchmark::FStar).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn hindsight_with_matching_decisions_is_zero() {
        // f(x) = x reproduces y exactly
        let x: Vec<Vec<f64>> = [-1.0, 0.5, -0.2, 2.0].iter().map(|v| vec![*v]).collect();
        let ds = Dataset::new(x.clone(), x, None).unwrap();
        let model = LinearModel::new(1, 1, vec![1.0], vec![0.0]).unwrap();
        let r = normalized_excess_regret(&model, &ds, &OracleSpec::binary(), Benchmark::Hindsight).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn zero_denominator_reported() {
        let ds = Dataset::new(vec![vec![0.0]; 2], vec![vec![1.0]; 2], Some(vec![vec![1.0]; 2])).unwrap();
        let err = normalized_excess_regret(&constant_model(0.0), &ds, &OracleSpec::binary(), Benchmark::FStar);
        assert!(matches!(err, Err(Error::ZeroDenominator)));
        let no_truth = Dataset::new(vec![vec![0.0]], vec![vec![-1.0]], None).unwrap();
        assert!(normalized_excess_regret(&constant_model(0.0), &no_truth, &OracleSpec::binary(), Benchmark::FStar).is_err());
    }

    #[test]
    fn report_statistics() {
        let r = RegretReport::from_samples("pgb", 100, None, &[0.1, 0.2, 0.3]);
        assert!((r.mean - 0.2).abs() < 1e-15);
        assert!((r.std - 0.1).abs() < 1e-15);
        assert!((r.ci95 - 1.96 * 0.1 / 3f64.sqrt()).abs() < 1e-15);
        let single = RegretReport::from_samples("eto", 5, None, &[0.4]);
        assert_eq!((single.std, single.ci95), (0.0, 0.0));
    }
}
