//! Experiment runners.
//!
//! Each runner returns a typed summary together with its series; [`run`]
//! validates the config, dispatches and wraps the result for output.

pub mod kp;
pub mod packet;
pub mod scaling;
pub mod simulate;
pub mod spectrum;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::output::RunOutput;

/// Validates `cfg` for `experiment`, runs it and packages the output.
///
/// A `kp-check` run whose suites report a failure still produces its output;
/// the failure is signalled through [`RunOutput::passed`].
pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate(experiment)?;
    let json = cfg.canonical_json();
    let hash = cfg.hash();
    let out = match experiment {
        Experiment::Spectrum => {
            let (s, series) = spectrum::run_spectrum(cfg)?;
            RunOutput::new(&s, &json, &hash, series)
        }
        Experiment::Gaps => {
            let (s, series) = spectrum::run_gaps(cfg)?;
            RunOutput::new(&s, &json, &hash, series)
        }
        Experiment::Simulate => {
            let (s, series) = simulate::run(cfg)?;
            RunOutput::new(&s, &json, &hash, series)
        }
        Experiment::Packet => {
            let (s, series) = packet::run(cfg)?;
            RunOutput::new(&s, &json, &hash, series)
        }
        Experiment::Scaling => {
            let (s, series) = scaling::run(cfg)?;
            RunOutput::new(&s, &json, &hash, series)
        }
        Experiment::KpCheck => {
            let (s, series) = kp::run(cfg)?;
            let mut out = RunOutput::new(&s, &json, &hash, series);
            out.passed = s.passed;
            out
        }
    };
    Ok(out)
}

/// Maps a failed self-check to an error after outputs have been written.
pub fn verdict(out: &RunOutput) -> Result<()> {
    if out.passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed("a majorant suite reported a failure; see the summary".into()))
    }
}
