//! Monte-Carlo orchestration and reporting.
//!
//! Each trial derives its own seeds from the master seed, so trials are
//! independent jobs and the output does not depend on the thread count.
//! The fixed structure of an experiment (the arc-cost matrix, the returns
//! history) is shared by every trial.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{
    derive_seed, gen_planted_path, gen_portfolio, gen_shortest_path, gen_simple_misspec_scaled, load_returns_csv,
    synthetic_returns, Dataset, ReturnsCsvOptions, PORTFOLIO_ASSETS,
};
use crate::error::{Error, Result};
use crate::model::LinearModel;
use crate::oracle::OracleSpec;
use crate::train::{pipeline, pipeline_with_warm_start, HGrid, Method, TrainConfig, TrainReport};

use super::config::{ExperimentConfig, ExperimentName};
use super::regret::{Benchmark, RegretBench, RegretReport};
use super::zeroth::{intercept_grid, scan_intercepts, InterceptScan};

const STREAM_BSTAR: u64 = 0x0b57_a400;
const STREAM_RETURNS: u64 = 0x5e70_11a5;
const STREAM_TEST: u64 = 1;
const STREAM_DATA: u64 = 1_000;
const STREAM_TRAIN: u64 = 2_000;

pub const CSV_HEADER: [&str; 7] = ["experiment", "method", "n", "trial", "regret", "chosen_h", "wall_ms"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: ExperimentName,
    pub method: Method,
    pub n: usize,
    pub trial: u64,
    pub regret: f64,
    pub chosen_h: Option<f64>,
    pub wall_ms: u64,
}

fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.method.cmp(&b.method))
            .then(a.chosen_h.unwrap_or(0.0).total_cmp(&b.chosen_h.unwrap_or(0.0)))
            .then(a.trial.cmp(&b.trial))
    });
}

/// A validated config with its shared structure materialized.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub oracle: OracleSpec,
    bstar_seed: u64,
    returns: Option<Vec<Vec<f64>>>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let oracle = match config.experiment {
            ExperimentName::SimpleMisspec | ExperimentName::ZerothCompare => OracleSpec::binary(),
            ExperimentName::ShortestRandom | ExperimentName::ShortestPlanted | ExperimentName::HSensitivity => {
                OracleSpec::grid5()
            }
            ExperimentName::Portfolio => OracleSpec::capped_simplex(PORTFOLIO_ASSETS, config.cap)?,
        };
        let returns = if config.experiment == ExperimentName::Portfolio {
            Some(match &config.returns_path {
                Some(path) => load_returns_csv(
                    path,
                    &ReturnsCsvOptions {
                        in_percent: config.returns_in_percent,
                        ..Default::default()
                    },
                )?,
                None => synthetic_returns(config.synthetic_months, derive_seed(config.seed, STREAM_RETURNS)),
            })
        } else {
            None
        };
        Ok(Experiment {
            bstar_seed: derive_seed(config.seed, STREAM_BSTAR),
            config,
            oracle,
            returns,
        })
    }

    pub fn benchmark(&self) -> Benchmark {
        match self.config.experiment {
            ExperimentName::Portfolio => Benchmark::Hindsight,
            _ => Benchmark::FStar,
        }
    }

    /// Draw `rows` samples of this experiment's data.
    pub fn generate(&self, rows: usize, seed: u64) -> Result<Dataset> {
        let c = &self.config;
        match c.experiment {
            ExperimentName::SimpleMisspec | ExperimentName::ZerothCompare => {
                gen_simple_misspec_scaled(rows, c.m, c.alpha, c.noise_scale, seed)
            }
            ExperimentName::ShortestRandom => gen_shortest_path(rows, c.noise.spec(), seed, self.bstar_seed),
            ExperimentName::ShortestPlanted | ExperimentName::HSensitivity => {
                gen_planted_path(rows, c.noise.spec(), seed, self.bstar_seed)
            }
            ExperimentName::Portfolio => {
                gen_portfolio(self.returns.as_ref().expect("portfolio returns"), rows, c.portfolio_noise, seed)
            }
        }
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        derive_seed(self.config.seed, trial)
    }

    /// Training config for one `(trial, n)` cell. The batch is capped at the
    /// training size so that very small `n` still trains.
    fn train_config(&self, trial_seed: u64, n: usize) -> TrainConfig {
        TrainConfig {
            batch: self.config.train.batch.min(n),
            seed: derive_seed(trial_seed ^ self.config.train.seed, STREAM_TRAIN + n as u64),
            ..self.config.train.clone()
        }
    }

    /// Seed of the training (plus validation) sample for one `(trial, n)` cell.
    pub fn data_seed(&self, trial: u64, n: usize) -> u64 {
        derive_seed(self.trial_seed(trial), STREAM_DATA + n as u64)
    }

    /// Surrogate curve of `method` over intercepts in [-1, 1] at fixed slope.
    pub fn scan(&self, data: &Dataset, method: Method) -> Result<InterceptScan> {
        let c = &self.config;
        let kind = method
            .pg_kind()
            .ok_or_else(|| Error::InvalidParameter(format!("{method} has no finite-difference surrogate")))?
            .with_h(c.zeroth_h)?;
        scan_intercepts(data, kind, &self.oracle, c.zeroth_slope, &intercept_grid(-1.0, 1.0, 0.01))
    }

    pub fn run_trial(&self, trial: u64) -> Result<Vec<ResultRow>> {
        self.run_trial_inner(trial).map_err(|e| Error::Trial {
            trial,
            source: Box::new(e),
        })
    }

    fn run_trial_inner(&self, trial: u64) -> Result<Vec<ResultRow>> {
        let c = &self.config;
        let seed = self.trial_seed(trial);
        let test = self.generate(c.test_size, derive_seed(seed, STREAM_TEST))?;
        let bench = RegretBench::new(test, &self.oracle, self.benchmark())?;
        let mut rows = Vec::new();
        for &n in &c.n {
            let tc = self.train_config(seed, n);
            let data_seed = self.data_seed(trial, n);
            let mut push = |method: Method, model: &LinearModel, chosen_h: Option<f64>, elapsed: Duration| -> Result<()> {
                let regret = bench.normalized_excess_regret(model, &self.oracle)?;
                rows.push(ResultRow {
                    experiment: c.experiment,
                    method,
                    n,
                    trial,
                    regret,
                    chosen_h,
                    wall_ms: if c.record_timing { elapsed.as_millis() as u64 } else { 0 },
                });
                Ok(())
            };

            if c.experiment == ExperimentName::ZerothCompare {
                let data = self.generate(n, data_seed)?;
                for &method in &c.methods {
                    let started = Instant::now();
                    let scan = self.scan(&data, method)?;
                    let model = LinearModel::new(1, 1, vec![c.zeroth_slope], vec![scan.argmin])?;
                    push(method, &model, Some(c.zeroth_h), started.elapsed())?;
                }
                continue;
            }

            let data = self.generate(n + tc.val_size, data_seed)?;
            let needs_spo = c.methods.iter().any(|m| *m == Method::SpoPlus || (m.pg_kind().is_some() && tc.warm_start));
            let spo_start = Instant::now();
            let spo: Option<TrainReport> = if needs_spo {
                Some(pipeline(&data, Method::SpoPlus, &self.oracle, &tc)?)
            } else {
                None
            };
            let spo_elapsed = spo_start.elapsed();

            for &method in &c.methods {
                if c.experiment == ExperimentName::HSensitivity {
                    for &h in &c.h_values {
                        let started = Instant::now();
                        let fixed = TrainConfig {
                            h_grid: HGrid::Values(vec![h]),
                            ..tc.clone()
                        };
                        let r = pipeline_with_warm_start(&data, method, &self.oracle, &fixed, spo.as_ref())?;
                        push(method, &r.best_model, Some(h), started.elapsed())?;
                    }
                    continue;
                }
                let started = Instant::now();
                let (report, elapsed) = match (method, &spo) {
                    (Method::SpoPlus, Some(r)) => (r.clone(), spo_elapsed),
                    _ => {
                        let r = pipeline_with_warm_start(&data, method, &self.oracle, &tc, spo.as_ref())?;
                        (r, started.elapsed())
                    }
                };
                push(method, &report.best_model, report.chosen_h, elapsed)?;
            }
        }
        Ok(rows)
    }

    /// Run every trial on a pool of `threads` workers (all cores if `None`).
    pub fn run(&self, threads: Option<usize>) -> Result<Vec<ResultRow>> {
        let trials = self.config.trials as u64;
        let work = || {
            (0..trials)
                .into_par_iter()
                .map(|t| self.run_trial(t))
                .collect::<Result<Vec<Vec<ResultRow>>>>()
        };
        let nested = match threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Config(format!("threads: {e}")))?
                .install(work)?,
            None => work()?,
        };
        let mut rows: Vec<ResultRow> = nested.into_iter().flatten().collect();
        sort_rows(&mut rows);
        Ok(rows)
    }
}

/// One Monte-Carlo replication of `config`.
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<Vec<ResultRow>> {
    Experiment::new(config.clone())?.run_trial(trial)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: ExperimentName,
    pub benchmark: Benchmark,
    pub trials: usize,
    pub seed: u64,
    pub reports: Vec<RegretReport>,
}

/// Group rows by `(method, n)`, and also by `h` for h-sensitivity.
pub fn summarize(experiment: ExperimentName, benchmark: Benchmark, seed: u64, rows: &[ResultRow]) -> Summary {
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let by_h = experiment == ExperimentName::HSensitivity;
    let key = |r: &ResultRow| (r.method, r.n, if by_h { r.chosen_h.map(f64::to_bits) } else { None });
    let mut reports = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let k = key(&sorted[start]);
        let mut end = start;
        let mut regrets = Vec::new();
        while end < sorted.len() && key(&sorted[end]) == k {
            regrets.push(sorted[end].regret);
            end += 1;
        }
        let h = if by_h { sorted[start].chosen_h } else { None };
        reports.push(RegretReport::from_samples(k.0.as_str(), k.1, h, &regrets));
        start = end;
    }
    let trials = sorted.iter().map(|r| r.trial).max().map_or(0, |t| t as usize + 1);
    Summary {
        experiment,
        benchmark,
        trials,
        seed,
        reports,
    }
}

pub fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.experiment.as_str().to_string(),
            r.method.as_str().to_string(),
            r.n.to_string(),
            r.trial.to_string(),
            r.regret.to_string(),
            r.chosen_h.map(|h| h.to_string()).unwrap_or_default(),
            r.wall_ms.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let bad = |message: String| Error::Csv {
            path: path.to_path_buf(),
            line,
            message,
        };
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec.len() != CSV_HEADER.len() {
            return Err(bad(format!("expected {} fields, got {}", CSV_HEADER.len(), rec.len())));
        }
        let num = |j: usize| -> Result<f64> { rec[j].parse().map_err(|_| bad(format!("{}: bad number", CSV_HEADER[j]))) };
        rows.push(ResultRow {
            experiment: rec[0].parse().map_err(|_| bad("unknown experiment".into()))?,
            method: rec[1].parse().map_err(|_| bad("unknown method".into()))?,
            n: rec[2].parse().map_err(|_| bad("n: bad integer".into()))?,
            trial: rec[3].parse().map_err(|_| bad("trial: bad integer".into()))?,
            regret: num(4)?,
            chosen_h: if rec[5].is_empty() { None } else { Some(num(5)?) },
            wall_ms: rec[6].parse().map_err(|_| bad("wall_ms: bad integer".into()))?,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    pub results_csv: PathBuf,
    pub summary_json: PathBuf,
}

/// Run all trials, then write `results.csv` and `summary.json` into `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path, threads: Option<usize>) -> Result<ExperimentOutput> {
    let experiment = Experiment::new(config.clone())?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let results_csv = out_dir.join("results.csv");
    let summary_json = out_dir.join("summary.json");
    // fail on an unwritable directory before spending time on trials
    fs::write(&results_csv, "").map_err(|e| Error::io(&results_csv, e))?;

    let rows = experiment.run(threads)?;
    write_results_csv(&results_csv, &rows)?;
    let summary = summarize(config.experiment, experiment.benchmark(), config.seed, &rows);
    let json = serde_json::to_string_pretty(&summary)?;
    fs::write(&summary_json, json + "\n").map_err(|e| Error::io(&summary_json, e))?;
    Ok(ExperimentOutput {
        rows,
        summary,
        results_csv,
        summary_json,
    })
}
