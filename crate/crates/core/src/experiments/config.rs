//! Experiment configuration: presets per experiment family, TOML files and
//! command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::datagen::NoiseSpec;
use crate::error::{Error, Result};
use crate::train::{HGrid, Method, TrainConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    SimpleMisspec,
    ShortestRandom,
    ShortestPlanted,
    Portfolio,
    ZerothCompare,
    HSensitivity,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 6] = [
        ExperimentName::SimpleMisspec,
        ExperimentName::ShortestRandom,
        ExperimentName::ShortestPlanted,
        ExperimentName::Portfolio,
        ExperimentName::ZerothCompare,
        ExperimentName::HSensitivity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::SimpleMisspec => "simple-misspec",
            ExperimentName::ShortestRandom => "shortest-random",
            ExperimentName::ShortestPlanted => "shortest-planted",
            ExperimentName::Portfolio => "portfolio",
            ExperimentName::ZerothCompare => "zeroth-compare",
            ExperimentName::HSensitivity => "h-sensitivity",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ExperimentName::SimpleMisspec => "binary decision, piecewise-linear truth with tunable misspecification",
            ExperimentName::ShortestRandom => "5x5 grid shortest path, random polynomial arc costs",
            ExperimentName::ShortestPlanted => "5x5 grid shortest path with a planted safe and risky path",
            ExperimentName::Portfolio => "12-asset capped-simplex allocation on monthly returns",
            ExperimentName::ZerothCompare => "backward/central/forward surrogates scanned over intercepts",
            ExperimentName::HSensitivity => "PGB regret for each fixed h on the planted shortest path",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

/// Noise family for the shortest-path generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    MultUniform,
    AddGaussian,
}

impl NoiseKind {
    pub fn spec(&self) -> NoiseSpec {
        match self {
            NoiseKind::MultUniform => NoiseSpec::mult_uniform(),
            NoiseKind::AddGaussian => NoiseSpec::add_gaussian(),
        }
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mult-uniform" => Ok(NoiseKind::MultUniform),
            "add-gaussian" => Ok(NoiseKind::AddGaussian),
            _ => Err(Error::Config(format!("unknown noise kind {s:?} (expected mult-uniform or add-gaussian)"))),
        }
    }
}

/// Fully resolved experiment description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    pub methods: Vec<Method>,
    /// Training-set sizes; `val_size` validation rows are generated on top.
    pub n: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub test_size: usize,
    /// Slope of the right-hand piece (simple-misspec, zeroth-compare).
    pub m: f64,
    /// Noise asymmetry (simple-misspec, zeroth-compare).
    pub alpha: f64,
    /// Multiplier on the simple-misspec noise; 0 gives noiseless data.
    pub noise_scale: f64,
    /// Shortest-path noise family.
    pub noise: NoiseKind,
    pub returns_path: Option<PathBuf>,
    pub returns_in_percent: bool,
    /// Months in the synthetic returns history used without a returns file.
    pub synthetic_months: usize,
    /// Context noise `N(0, portfolio_noise * Sigma)`.
    pub portfolio_noise: f64,
    /// Per-asset cap of the portfolio feasible set.
    pub cap: f64,
    /// Fixed step sizes for h-sensitivity.
    pub h_values: Vec<f64>,
    /// Slope of the intercept-only class in zeroth-compare.
    pub zeroth_slope: f64,
    /// Step size used by the zeroth-compare surrogates.
    pub zeroth_h: f64,
    /// Fill `wall_ms`; off by default so reruns are byte-identical.
    pub record_timing: bool,
    pub train: TrainConfig,
}

impl ExperimentConfig {
    pub fn preset(experiment: ExperimentName) -> Self {
        use Method::*;
        let base = ExperimentConfig {
            experiment,
            methods: vec![Eto, SpoPlus, Pgb, Pgc],
            n: vec![200],
            trials: 20,
            seed: 0,
            test_size: 10_000,
            m: 0.0,
            alpha: 1.0,
            noise_scale: 1.0,
            noise: NoiseKind::AddGaussian,
            returns_path: None,
            returns_in_percent: false,
            synthetic_months: 120,
            portfolio_noise: 0.5,
            cap: 0.25,
            h_values: vec![0.001, 0.035, 0.188, 0.434],
            zeroth_slope: -0.1,
            zeroth_h: 0.5,
            record_timing: false,
            train: TrainConfig::default(),
        };
        match experiment {
            ExperimentName::SimpleMisspec => ExperimentConfig { n: vec![100, 500, 2000], ..base },
            ExperimentName::ShortestRandom | ExperimentName::ShortestPlanted | ExperimentName::Portfolio => {
                ExperimentConfig { n: vec![200, 800], ..base }
            }
            ExperimentName::ZerothCompare => ExperimentConfig { methods: vec![Pgb, Pgc, Pgf], ..base },
            ExperimentName::HSensitivity => ExperimentConfig { methods: vec![Pgb], n: vec![800], ..base },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.methods.is_empty() {
            return bad("methods: at least one method is required".into());
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("n: need at least one positive training size".into());
        }
        if self.trials == 0 {
            return bad("trials: must be >= 1".into());
        }
        if self.test_size == 0 {
            return bad("test_size: must be >= 1".into());
        }
        self.train.validate().map_err(|e| Error::Config(format!("train: {e}")))?;
        match self.experiment {
            ExperimentName::SimpleMisspec | ExperimentName::ZerothCompare => {
                if !(-4.0..=0.0).contains(&self.m) {
                    return bad(format!("m: must lie in [-4, 0], got {}", self.m));
                }
                if !(0.0..=1.0).contains(&self.alpha) {
                    return bad(format!("alpha: must lie in [0, 1], got {}", self.alpha));
                }
                if !(self.noise_scale >= 0.0 && self.noise_scale.is_finite()) {
                    return bad(format!("noise_scale: must be >= 0, got {}", self.noise_scale));
                }
            }
            ExperimentName::Portfolio => {
                if !(self.cap > 0.0 && self.cap <= 1.0) || 12.0 * self.cap < 1.0 {
                    return bad(format!("cap: need 1/12 <= cap <= 1, got {}", self.cap));
                }
                if !(self.portfolio_noise >= 0.0 && self.portfolio_noise.is_finite()) {
                    return bad(format!("portfolio_noise: must be >= 0, got {}", self.portfolio_noise));
                }
                if self.returns_path.is_none() && self.synthetic_months < 24 {
                    return bad("synthetic_months: need at least 24 months".into());
                }
            }
            _ => {}
        }
        match self.experiment {
            ExperimentName::ZerothCompare | ExperimentName::HSensitivity => {
                if let Some(m) = self.methods.iter().find(|m| m.pg_kind().is_none()) {
                    return bad(format!("methods: {} only supports pgb, pgc and pgf, got {m}", self.experiment));
                }
            }
            _ => {}
        }
        if self.experiment == ExperimentName::ZerothCompare && !(self.zeroth_h > 0.0 && self.zeroth_h.is_finite()) {
            return bad(format!("zeroth_h: must be positive, got {}", self.zeroth_h));
        }
        if self.experiment == ExperimentName::HSensitivity
            && (self.h_values.is_empty() || self.h_values.iter().any(|h| !(*h > 0.0 && h.is_finite())))
        {
            return bad("h_values: need at least one positive step size".into());
        }
        Ok(())
    }

    /// Parse a TOML config file.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: ConfigOverrides = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.resolve()
    }

    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

/// Training overrides; every field optional.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainOverrides {
    pub epochs: Option<usize>,
    pub batch: Option<usize>,
    pub lr: Option<f64>,
    pub val_size: Option<usize>,
    pub h_grid: Option<HGrid>,
    pub seed: Option<u64>,
    pub warm_start: Option<bool>,
}

/// Partial [`ExperimentConfig`]: the shape of a TOML config file and of the
/// command-line flag set. Unset fields fall back to the experiment preset.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub experiment: Option<ExperimentName>,
    pub methods: Option<Vec<Method>>,
    pub n: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub test_size: Option<usize>,
    pub m: Option<f64>,
    pub alpha: Option<f64>,
    pub noise_scale: Option<f64>,
    pub noise: Option<NoiseKind>,
    pub returns_path: Option<PathBuf>,
    pub returns_in_percent: Option<bool>,
    pub synthetic_months: Option<usize>,
    pub portfolio_noise: Option<f64>,
    pub cap: Option<f64>,
    pub h_values: Option<Vec<f64>>,
    pub zeroth_slope: Option<f64>,
    pub zeroth_h: Option<f64>,
    pub record_timing: Option<bool>,
    pub train: Option<TrainOverrides>,
}

impl ConfigOverrides {
    /// Fields set in `other` win.
    pub fn merge(mut self, other: ConfigOverrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            experiment, methods, n, trials, seed, test_size, m, alpha, noise_scale, noise, returns_path,
            returns_in_percent, synthetic_months, portfolio_noise, cap, h_values, zeroth_slope, zeroth_h,
            record_timing
        );
        if let Some(t) = other.train {
            let mut mine = self.train.take().unwrap_or_default();
            macro_rules! take_train {
                ($($f:ident),*) => { $( if t.$f.is_some() { mine.$f = t.$f; } )* };
            }
            take_train!(epochs, batch, lr, val_size, h_grid, seed, warm_start);
            self.train = Some(mine);
        }
        self
    }

    pub fn resolve(self) -> Result<ExperimentConfig> {
        let name = self
            .experiment
            .ok_or_else(|| Error::Config("experiment: missing experiment name".into()))?;
        let mut c = ExperimentConfig::preset(name);
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        set!(
            methods, n, trials, seed, test_size, m, alpha, noise_scale, noise, returns_in_percent,
            synthetic_months, portfolio_noise, cap, h_values, zeroth_slope, zeroth_h, record_timing
        );
        if self.returns_path.is_some() {
            c.returns_path = self.returns_path;
        }
        if let Some(t) = self.train {
            let tc = &mut c.train;
            macro_rules! set_train {
                ($($f:ident),*) => { $( if let Some(v) = t.$f { tc.$f = v; } )* };
            }
            set_train!(epochs, batch, lr, val_size, h_grid, seed, warm_start);
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in ExperimentName::ALL {
            assert_eq!(e.as_str().parse::<ExperimentName>().unwrap(), e);
        }
        assert!("knapsack".parse::<ExperimentName>().is_err());
    }

    #[test]
    fn toml_with_overrides() {
        let c = ExperimentConfig::from_toml_str(
            r#"
            experiment = "shortest-planted"
            methods = ["eto", "pgb"]
            n = [100]
            trials = 3
            noise = "mult-uniform"
            [train]
            epochs = 5
            h_grid = [0.01, 0.1]
            "#,
        )
        .unwrap();
        assert_eq!(c.experiment, ExperimentName::ShortestPlanted);
        assert_eq!(c.methods, vec![Method::Eto, Method::Pgb]);
        assert_eq!(c.noise, NoiseKind::MultUniform);
        assert_eq!(c.train.epochs, 5);
        assert_eq!(c.train.batch, 32);
        assert_eq!(c.train.h_grid, HGrid::Values(vec![0.01, 0.1]));
        assert_eq!(c.test_size, 10_000);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = ExperimentConfig::from_toml_str("experiment = \"portfolio\"\ntrails = 3\n").unwrap_err();
        assert!(err.to_string().contains("trails"), "{err}");
        let err = ExperimentConfig::from_toml_str("experiment = \"portfolio\"\n[train]\nepoch = 3\n").unwrap_err();
        assert!(err.to_string().contains("epoch"), "{err}");
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(ExperimentConfig::from_toml_str("trials = 3").is_err());
        assert!(ExperimentConfig::from_toml_str("experiment = \"simple-misspec\"\nm = 1.0").is_err());
        assert!(ExperimentConfig::from_toml_str("experiment = \"zeroth-compare\"\nmethods = [\"eto\"]").is_err());
        assert!(ExperimentConfig::from_toml_str("experiment = \"simple-misspec\"\ntest_size = 0").is_err());
        assert!(ExperimentConfig::from_toml_str("experiment = \"simple-misspec\"\n[train]\nepochs = 0").is_err());
    }

    #[test]
    fn merge_prefers_later() {
        let a = ConfigOverrides { trials: Some(3), ..Default::default() };
        let b = ConfigOverrides {
            experiment: Some(ExperimentName::Portfolio),
            trials: Some(5),
            train: Some(TrainOverrides { epochs: Some(2), ..Default::default() }),
            ..Default::default()
        };
        let c = a.merge(b).resolve().unwrap();
        assert_eq!(c.trials, 5);
        assert_eq!(c.train.epochs, 2);
        assert_eq!(c.n, vec![200, 800]);
    }
}
