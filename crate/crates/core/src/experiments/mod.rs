//! Regret evaluation, Monte-Carlo experiment runners, and the CLI.

pub mod cli;
pub mod config;
pub mod regret;
pub mod runner;
pub mod zeroth;

pub use cli::cli_main;
pub use config::{ConfigOverrides, ExperimentConfig, ExperimentName, NoiseKind, TrainOverrides};
pub use regret::{normalized_excess_regret, Benchmark, RegretBench, RegretReport};
pub use runner::{read_results_csv, run_experiment, run_trial, summarize, Experiment, ExperimentOutput, ResultRow, Summary};
pub use zeroth::{intercept_grid, scan_intercepts, InterceptScan};
