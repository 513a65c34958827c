//! Experiment configuration read from JSON.
//!
//! Every field has a default so that a config file only needs to name what
//! differs; unknown fields are rejected. The schema is documented in
//! `docs/config.md`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toda_birkhoff::dynamics::{IntegratorConfig, Model, Scheme};

use crate::error::{CliError, Result};

/// The experiments the workbench can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Eigenvalues of the doubled Jacobi matrix.
    Spectrum,
    /// Spectral gaps, optionally tracked along Toda trajectories.
    Gaps,
    /// Plain integration of one lattice from random or packet data.
    Simulate,
    /// Persistence of a low-mode packet in Toda and FPU.
    Packet,
    /// Growth of the second differential of the Birkhoff map with `N`.
    Scaling,
    /// Identity and inequality suites of the majorant calculus.
    KpCheck,
}

impl Experiment {
    /// Kebab-case name used for output files.
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::Gaps => "gaps",
            Self::Simulate => "simulate",
            Self::Packet => "packet",
            Self::Scaling => "scaling",
            Self::KpCheck => "kp-check",
        }
    }
}

/// A lattice model as written in the config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    /// Toda lattice.
    Toda,
    /// FPU lattice with quartic coefficient `beta`.
    Fpu { beta: f64 },
    /// Harmonic chain.
    Harmonic,
}

impl ModelSpec {
    /// Library model.
    pub fn model(self) -> Model {
        match self {
            Self::Toda => Model::Toda,
            Self::Fpu { beta } => Model::Fpu { beta },
            Self::Harmonic => Model::Harmonic,
        }
    }

    /// Short label used in file names and summaries.
    pub fn label(self) -> String {
        match self {
            Self::Toda => "toda".into(),
            Self::Fpu { beta } => format!("fpu-beta{beta}"),
            Self::Harmonic => "harmonic".into(),
        }
    }
}

/// Time-stepping scheme as written in the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeSpec {
    /// Second-order Störmer–Verlet.
    Leapfrog,
    /// Fourth-order Yoshida composition.
    Yoshida4,
}

/// Integrator settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSettings {
    /// Time step; `null` selects `0.05 / max ω`.
    pub dt: Option<f64>,
    /// Number of steps.
    pub steps: usize,
    /// Record diagnostics every this many steps.
    pub record_every: usize,
    /// Scheme.
    pub scheme: SchemeSpec,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            dt: None,
            steps: 1000,
            record_every: 10,
            scheme: SchemeSpec::Yoshida4,
        }
    }
}

impl IntegratorSettings {
    /// Library integrator configuration for a lattice of size `n`.
    pub fn to_config(&self, n: usize) -> IntegratorConfig {
        IntegratorConfig {
            dt: self.dt.unwrap_or_else(|| IntegratorConfig::default_dt(n)),
            steps: self.steps,
            scheme: match self.scheme {
                SchemeSpec::Leapfrog => Scheme::Leapfrog,
                SchemeSpec::Yoshida4 => Scheme::Yoshida4,
            },
            record_every: self.record_every,
        }
    }
}

/// Fit windows for the packet profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitWindow {
    /// Largest mode index in the slope fit; `null` selects `N/4`.
    pub k_max: Option<usize>,
    /// Fits use the samples with `t ≥ t_from · T`.
    pub t_from: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self {
            k_max: None,
            t_from: 0.5,
        }
    }
}

/// Full experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Lattice size for single-size experiments.
    pub n: usize,
    /// Lattice sizes for sweeps.
    pub n_list: Vec<usize>,
    /// Packet amplitude `R`.
    pub amplitude: f64,
    /// Analyticity weight `σ`.
    pub sigma: f64,
    /// Sobolev exponent `s`.
    pub s: f64,
    /// Models to integrate.
    pub models: Vec<ModelSpec>,
    /// RNG seed.
    pub seed: u64,
    /// Random states per lattice size.
    pub samples: usize,
    /// Specific energy `H₀/N` of random states.
    pub specific_energy: f64,
    /// Initial data of `simulate`: `"random"` or `"packet"`.
    pub initial: InitialData,
    /// Phase of the packet datum in radians.
    pub phase: f64,
    /// Track spectral gaps and actions during integration.
    pub spectral: bool,
    /// Integrator settings.
    pub integrator: IntegratorSettings,
    /// Fit windows.
    pub fit: FitWindow,
    /// Truncation degree of the majorant suites.
    pub degree: u32,
    /// Number of random maps in the majorant suites.
    pub maps: usize,
    /// Largest `n` of the series inequality check.
    pub series_n: usize,
    /// Largest `r` of the series inequality check.
    pub series_r: usize,
}

/// Initial data for `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialData {
    /// Random reduced state at the configured specific energy.
    Random,
    /// Low-mode packet with amplitude `R` and weight `σ`.
    Packet,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 32,
            n_list: vec![8, 16, 32],
            amplitude: 0.5,
            sigma: 0.5,
            s: 1.0,
            models: vec![ModelSpec::Toda],
            seed: 0,
            samples: 1,
            specific_energy: 1e-4,
            initial: InitialData::Random,
            phase: 0.0,
            spectral: true,
            integrator: IntegratorSettings::default(),
            fit: FitWindow::default(),
            degree: 8,
            maps: 100,
            series_n: 30,
            series_r: 5,
        }
    }
}

impl ExperimentConfig {
    /// Parses a config from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(&field_of(&e), e.to_string()))
    }

    /// Reads and parses a config file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical JSON form, used for the config echo and hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    /// Hex SHA-256 of [`Self::canonical_json`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks the fields used by `experiment`.
    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        match experiment {
            Experiment::Spectrum => {
                self.check_n_list(2)?;
                self.check_energy()?;
            }
            Experiment::Gaps => {
                self.check_n_list(2)?;
                self.check_energy()?;
                if self.samples == 0 {
                    return Err(CliError::config("samples", "must be at least 1"));
                }
                self.check_integrator(&self.n_list, true)?;
            }
            Experiment::Simulate => {
                check_n("n", self.n, 2)?;
                if self.models.len() != 1 {
                    return Err(CliError::config("models", "simulate takes exactly one model"));
                }
                match self.initial {
                    InitialData::Random => self.check_energy()?,
                    InitialData::Packet => self.check_packet()?,
                }
                self.check_models()?;
                self.check_integrator(&[self.n], false)?;
            }
            Experiment::Packet => {
                check_n("n", self.n, 4)?;
                self.check_packet()?;
                if self.models.is_empty() {
                    return Err(CliError::config("models", "at least one model is required"));
                }
                self.check_models()?;
                self.check_integrator(&[self.n], false)?;
                if let Some(k) = self.fit.k_max {
                    if k < 2 || k > self.n / 2 {
                        return Err(CliError::config("fit.k_max", format!("must lie in 2..={}", self.n / 2)));
                    }
                }
                if !(0.0..1.0).contains(&self.fit.t_from) {
                    return Err(CliError::config("fit.t_from", "must lie in [0, 1)"));
                }
            }
            Experiment::Scaling => {
                if self.n_list.len() < 4 {
                    return Err(CliError::config("n_list", "scaling needs at least 4 lattice sizes"));
                }
                self.check_n_list(4)?;
            }
            Experiment::KpCheck => {
                if self.degree < 2 || self.degree > 12 {
                    return Err(CliError::config("degree", "must lie in 2..=12"));
                }
                if self.series_n == 0 || self.series_n > 40 {
                    return Err(CliError::config("series_n", "must lie in 1..=40"));
                }
                if self.series_r == 0 || self.series_r > 6 {
                    return Err(CliError::config("series_r", "must lie in 1..=6"));
                }
            }
        }
        Ok(())
    }

    fn check_n_list(&self, min: usize) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(CliError::config("n_list", "must not be empty"));
        }
        for &n in &self.n_list {
            check_n("n_list", n, min)?;
        }
        Ok(())
    }

    fn check_energy(&self) -> Result<()> {
        if !(self.specific_energy >= 0.0 && self.specific_energy.is_finite()) {
            return Err(CliError::config("specific_energy", "must be finite and non-negative"));
        }
        Ok(())
    }

    fn check_packet(&self) -> Result<()> {
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(CliError::config("amplitude", "R must be positive"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(CliError::config("sigma", "must be finite and non-negative"));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(CliError::config("s", "must be finite and non-negative"));
        }
        if !self.phase.is_finite() {
            return Err(CliError::config("phase", "must be finite"));
        }
        Ok(())
    }

    fn check_models(&self) -> Result<()> {
        for m in &self.models {
            if let ModelSpec::Fpu { beta } = m {
                if !beta.is_finite() {
                    return Err(CliError::config("models", "beta must be finite"));
                }
            }
        }
        Ok(())
    }

    fn check_integrator(&self, sizes: &[usize], allow_zero_steps: bool) -> Result<()> {
        let it = &self.integrator;
        if let Some(dt) = it.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(CliError::config("integrator.dt", "must be positive"));
            }
        }
        if it.steps == 0 && !allow_zero_steps {
            return Err(CliError::config("integrator.steps", "must be at least 1"));
        }
        if it.record_every == 0 {
            return Err(CliError::config("integrator.record_every", "must be at least 1"));
        }
        if it.steps > 0 {
            for &n in sizes {
                if let Err(e) = it.to_config(n).validate(n) {
                    return Err(CliError::config("integrator.dt", format!("N = {n}: {e}")));
                }
            }
        }
        if it.steps % it.record_every != 0 {
            return Err(CliError::config(
                "integrator.record_every",
                "must divide integrator.steps so that samples are uniform",
            ));
        }
        Ok(())
    }
}

fn check_n(field: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(CliError::config(field, format!("lattice size {n} is below {min}")));
    }
    Ok(())
}

/// Best-effort extraction of the field named in a serde error message.
fn field_of(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    for marker in ["unknown field `", "missing field `"] {
        if let Some(rest) = msg.split(marker).nth(1) {
            if let Some(name) = rest.split('`').next() {
                return name.to_string();
            }
        }
    }
    "config".to_string()
}
