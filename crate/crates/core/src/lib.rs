//! Perturbation-gradient (PG) surrogate losses for predict-then-optimize.
//!
//! A model predicts a cost vector `t`; a linear-optimization oracle turns it
//! into a decision `z(t) = argmin_{z in Z} t'z`; the realized cost is
//! `y'z(t)`. That decision loss is piecewise constant in `t`, so this crate
//! trains against finite-difference surrogates of it instead:
//!
//! - [`oracle`]: deterministic solvers for binary, interval, grid shortest
//!   path, capped simplex and enumerated feasible sets.
//! - [`losses`]: decision loss, PGB/PGC/PGF, SPO+ and MSE, each with a
//!   gradient in `t`.
//! - [`model`]: linear hypothesis `Wx + b` and Adam.
//! - [`datagen`]: seeded generators for the experiment families and a
//!   returns-CSV reader.
//! - [`train`]: minibatch training, step-size selection, and the
//!   estimate-then-optimize baseline.
//! - [`experiments`]: regret evaluation, Monte-Carlo runners, and the CLI.
//!
//! ```
//! use pgopt::losses::{decision_loss, pgb};
//! use pgopt::oracle::OracleSpec;
//!
//! let oracle = OracleSpec::binary();
//! let exact = decision_loss(&oracle, &[0.1], &[1.0]).unwrap();
//! let smooth = pgb(&oracle, &[0.1], &[1.0], 0.5).unwrap();
//! assert!(smooth.value >= exact.value);
//! ```

pub mod datagen;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod losses;
pub mod model;
pub mod oracle;
pub mod train;

pub use error::{Error, Result};
