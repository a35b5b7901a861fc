//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::train::{HGrid, Method};

use super::config::{ConfigOverrides, ExperimentConfig, ExperimentName, NoiseKind, TrainOverrides};
use super::runner::run_experiment;

pub const SEED_ENV: &str = "PGOPT_SEED";

#[derive(Debug, Parser)]
#[command(name = "pgopt", version, about = "Perturbation-gradient decision-focused learning experiments")]
struct Cli {
    /// Directory for results.csv and summary.json.
    #[arg(long, global = true, default_value = "pgopt-out")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed; overrides the config file and PGOPT_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment from a TOML config and/or flags.
    Run(Box<RunArgs>),
    /// Parse and check a TOML config without running it.
    ValidateConfig { path: PathBuf },
    /// Print the available experiment names.
    ListExperiments,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated training sizes.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Comma-separated methods: eto, spo-plus, pgb, pgc, pgf.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    test_size: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// mult-uniform or add-gaussian.
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    returns: Option<PathBuf>,
    /// Returns file is in percent; divide by 100.
    #[arg(long)]
    returns_in_percent: bool,
    /// "auto" or comma-separated step sizes.
    #[arg(long)]
    h_grid: Option<String>,
    /// Comma-separated fixed step sizes (h-sensitivity).
    #[arg(long, value_delimiter = ',')]
    h_values: Option<Vec<f64>>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    val_size: Option<usize>,
    /// Train the PG losses from zeros instead of the SPO+ model.
    #[arg(long)]
    no_warm_start: bool,
    /// Record wall-clock milliseconds per row.
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn overrides(&self) -> Result<ConfigOverrides> {
        let h_grid = match self.h_grid.as_deref() {
            None => None,
            Some("auto") => Some(HGrid::Auto),
            Some(list) => Some(HGrid::Values(
                list.split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("--h-grid: bad value {v:?}"))))
                    .collect::<Result<_>>()?,
            )),
        };
        let train = TrainOverrides {
            epochs: self.epochs,
            batch: self.batch,
            lr: self.lr,
            val_size: self.val_size,
            h_grid,
            seed: None,
            warm_start: self.no_warm_start.then_some(false),
        };
        Ok(ConfigOverrides {
            experiment: self.experiment.as_deref().map(str::parse::<ExperimentName>).transpose()?,
            methods: self
                .methods
                .as_ref()
                .map(|ms| ms.iter().map(|m| m.parse::<Method>()).collect::<Result<Vec<_>>>())
                .transpose()?,
            n: self.n.clone(),
            trials: self.trials,
            test_size: self.test_size,
            m: self.m,
            alpha: self.alpha,
            noise: self.noise.as_deref().map(str::parse::<NoiseKind>).transpose()?,
            returns_path: self.returns.clone(),
            returns_in_percent: self.returns_in_percent.then_some(true),
            h_values: self.h_values.clone(),
            record_timing: self.timing.then_some(true),
            train: Some(train),
            ..Default::default()
        })
    }
}

fn load_overrides(path: &PathBuf) -> Result<ConfigOverrides> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_ENV}: not an unsigned integer: {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Resolve a run's config: file, then environment seed, then flags.
fn resolve_run(args: &RunArgs, cli_seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut merged = match &args.config {
        Some(path) => load_overrides(path)?,
        None => ConfigOverrides::default(),
    };
    if let Some(seed) = env_seed()? {
        merged.seed = Some(seed);
    }
    let mut flags = args.overrides()?;
    flags.seed = cli_seed;
    merged.merge(flags).resolve()
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ListExperiments => {
            for e in ExperimentName::ALL {
                println!("{:<18}{}", e.as_str(), e.description());
            }
            Ok(())
        }
        Command::ValidateConfig { path } => {
            let config = ExperimentConfig::from_toml_file(&path)?;
            println!(
                "{}: ok ({}, {} method(s), n = {:?}, {} trial(s))",
                path.display(),
                config.experiment,
                config.methods.len(),
                config.n,
                config.trials
            );
            Ok(())
        }
        Command::Run(args) => {
            let config = resolve_run(&args, cli.seed)?;
            let out = run_experiment(&config, &cli.out_dir, cli.threads)?;
            println!("{:<10} {:>6} {:>8} {:>10} {:>10}", "method", "n", "h", "regret", "ci95");
            for r in &out.summary.reports {
                let h = r.h.map_or_else(|| "-".to_string(), |h| h.to_string());
                println!("{:<10} {:>6} {:>8} {:>10.5} {:>10.5}", r.method, r.n, h, r.mean, r.ci95);
            }
            println!("wrote {} and {}", out.results_csv.display(), out.summary_json.display());
            Ok(())
        }
    }
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Config(_)) {
                eprintln!("\nusage: pgopt [--out-dir DIR] [--threads N] [--seed S] <run|validate-config|list-experiments>");
                eprintln!("       pgopt run --experiment <name> [--trials T] [--n N1,N2] [--methods eto,pgb,...]");
                eprintln!("       pgopt run --config <file.toml>");
            }
            1
        }
    }
}
