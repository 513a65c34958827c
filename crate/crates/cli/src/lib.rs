//! Workbench for the Toda/FPU experiments.
//!
//! The binary `toda-bench` reads a JSON config, runs one experiment and
//! writes a summary JSON plus `(t, k, value)` CSV series. The library part
//! exposes the same runners for tests and scripts.

pub mod config;
pub mod data;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, Result};
pub use output::{RunOutput, Series};
