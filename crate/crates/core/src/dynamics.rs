//! Hamiltonian vector fields and symplectic integration.
//!
//! Both lattices have separable Hamiltonians `½Σp² + Σ V(q_j − q_{j+1})`, so
//! Hamilton's equations read `q̇_j = p_j`,
//! `ṗ_j = −V'(q_j − q_{j+1}) + V'(q_{j−1} − q_j)`. The integrators are the
//! Störmer–Verlet (kick-drift-kick leapfrog) scheme and its fourth-order
//! Yoshida composition.

use crate::fourier::{self, mode_table};
use crate::lattice::{self, LatticeState};
use crate::spectral::{self, SpectrumData};
use crate::{Error, Result};

/// Which lattice to integrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Toda: `V(x) = e^x`.
    Toda,
    /// FPU: `V(x) = x²/2 + x³/6 + βx⁴/24`.
    Fpu {
        /// Quartic coefficient `β`.
        beta: f64,
    },
    /// Harmonic chain: `V(x) = x²/2`.
    Harmonic,
}

impl Model {
    fn pair_force(&self, x: f64) -> f64 {
        match *self {
            Model::Toda => x.exp(),
            Model::Fpu { beta } => x + x * x / 2.0 + beta * x * x * x / 6.0,
            Model::Harmonic => x,
        }
    }

    /// Energy of `state`; for Toda the constant `N` is subtracted.
    pub fn energy(&self, state: &LatticeState) -> f64 {
        match *self {
            Model::Toda => lattice::toda_energy_relative(state),
            Model::Fpu { beta } => lattice::fpu_energy(state, beta),
            Model::Harmonic => lattice::h0(state),
        }
    }

    /// Momentum rate `ṗ = −∂H/∂q` at positions `q`, written into `out`.
    pub fn force_into(&self, q: &[f64], out: &mut [f64]) {
        let n = q.len();
        let mut prev = self.pair_force(q[n - 1] - q[0]);
        for j in 0..n {
            let cur = self.pair_force(q[j] - q[(j + 1) % n]);
            out[j] = prev - cur;
            prev = cur;
        }
    }

    /// Hamiltonian vector field `(ṗ, q̇)`.
    pub fn field(&self, state: &LatticeState) -> (Vec<f64>, Vec<f64>) {
        let mut dp = vec![0.0; state.n()];
        self.force_into(state.q(), &mut dp);
        (dp, state.p().to_vec())
    }
}

/// Toda vector field `(ṗ, q̇)`.
pub fn toda_field(state: &LatticeState) -> (Vec<f64>, Vec<f64>) {
    Model::Toda.field(state)
}

/// FPU vector field `(ṗ, q̇)`.
pub fn fpu_field(state: &LatticeState, beta: f64) -> (Vec<f64>, Vec<f64>) {
    Model::Fpu { beta }.field(state)
}

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order Störmer–Verlet.
    Leapfrog,
    /// Fourth-order Yoshida composition of three leapfrog steps.
    Yoshida4,
}

/// Integration parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Time step.
    pub dt: f64,
    /// Number of steps.
    pub steps: usize,
    /// Scheme.
    pub scheme: Scheme,
    /// Record every this many steps (the initial state is always recorded).
    pub record_every: usize,
}

impl IntegratorConfig {
    /// Default step `0.05 / max_k ω_k` for a chain of `n` sites.
    pub fn default_dt(n: usize) -> f64 {
        0.05 / mode_table(n).max_omega()
    }

    /// Checks `dt > 0`, `record_every ≥ 1` and `dt·max ω < 1`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt = {} must be positive", self.dt)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be at least 1".into()));
        }
        let limit = self.dt * mode_table(n).max_omega();
        if limit >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "dt·max ω = {limit} violates the stability bound 1"
            )));
        }
        Ok(())
    }
}

/// Optional diagnostics evaluated at every recorded sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    /// Record the thinned states themselves.
    pub states: bool,
    /// Record mode energies `E_k`.
    pub mode_energies: bool,
    /// Record spectral gaps of the Toda Lax matrix and the action proxy.
    pub spectral: bool,
}

/// Output of [`integrate`].
#[derive(Debug, Clone, Default)]
pub struct TrajectoryRecord {
    /// Sample times.
    pub times: Vec<f64>,
    /// Energy of the integrated model at each sample.
    pub energies: Vec<f64>,
    /// Thinned states (empty unless requested).
    pub states: Vec<LatticeState>,
    /// Mode energies `E_k`, `k = 1..N-1`, per sample (empty unless requested).
    pub mode_energies: Vec<Vec<f64>>,
    /// Gaps `γ_j`, `j = 1..N-1`, per sample (empty unless requested).
    pub gaps: Vec<Vec<f64>>,
    /// Action proxy `I_j`, per sample (empty unless requested).
    pub actions: Vec<Vec<f64>>,
    /// Final state.
    pub final_state: Option<LatticeState>,
}

impl TrajectoryRecord {
    /// `max_t |E(t) − E(0)| / |E(0)|` (absolute drift when `E(0) = 0`).
    pub fn relative_energy_drift(&self) -> f64 {
        let e0 = self.energies.first().copied().unwrap_or(0.0);
        let drift = self
            .energies
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0, f64::max);
        if e0 == 0.0 {
            drift
        } else {
            drift / e0.abs()
        }
    }

    /// `max_t |γ_j(t) − γ_j(0)|` for each `j`.
    pub fn gap_drift(&self) -> Vec<f64> {
        series_drift(&self.gaps)
    }

    /// `max_t |I_j(t) − I_j(0)|` for each `j`.
    pub fn action_drift(&self) -> Vec<f64> {
        series_drift(&self.actions)
    }
}

fn series_drift(series: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    let mut out = vec![0.0_f64; first.len()];
    for row in series {
        for (o, (x, x0)) in out.iter_mut().zip(row.iter().zip(first)) {
            *o = o.max((x - x0).abs());
        }
    }
    out
}

struct Stepper {
    model: Model,
    p: Vec<f64>,
    q: Vec<f64>,
    force: Vec<f64>,
}

impl Stepper {
    fn new(model: Model, state: &LatticeState) -> Self {
        let mut force = vec![0.0; state.n()];
        model.force_into(state.q(), &mut force);
        Self {
            model,
            p: state.p().to_vec(),
            q: state.q().to_vec(),
            force,
        }
    }

    /// One kick-drift-kick step; `self.force` holds the force at `self.q` on
    /// entry and on exit.
    fn leapfrog(&mut self, h: f64) {
        for (p, f) in self.p.iter_mut().zip(&self.force) {
            *p += 0.5 * h * f;
        }
        for (q, p) in self.q.iter_mut().zip(&self.p) {
            *q += h * p;
        }
        self.model.force_into(&self.q, &mut self.force);
        for (p, f) in self.p.iter_mut().zip(&self.force) {
            *p += 0.5 * h * f;
        }
    }

    fn step(&mut self, scheme: Scheme, dt: f64) {
        match scheme {
            Scheme::Leapfrog => self.leapfrog(dt),
            Scheme::Yoshida4 => {
                let cbrt2 = 2f64.cbrt();
                let w1 = 1.0 / (2.0 - cbrt2);
                let w0 = -cbrt2 * w1;
                self.leapfrog(w1 * dt);
                self.leapfrog(w0 * dt);
                self.leapfrog(w1 * dt);
            }
        }
    }

    fn finite(&self) -> bool {
        self.p.iter().chain(&self.q).all(|x| x.is_finite())
    }

    fn state(&self, reduced: bool) -> LatticeState {
        LatticeState::from_parts_unchecked(self.p.clone(), self.q.clone(), reduced)
    }
}

/// Integrates `model` from `state` with the given scheme, recording energy
/// and the requested diagnostics every `record_every` steps.
pub fn integrate(
    state: &LatticeState,
    model: Model,
    cfg: &IntegratorConfig,
    diagnostics: Diagnostics,
) -> Result<TrajectoryRecord> {
    cfg.validate(state.n())?;
    let reduced = state.is_reduced();
    let mut stepper = Stepper::new(model, state);
    let mut rec = TrajectoryRecord::default();
    record(&mut rec, &stepper.state(reduced), 0.0, model, diagnostics)?;
    for step in 1..=cfg.steps {
        stepper.step(cfg.scheme, cfg.dt);
        if !stepper.finite() {
            return Err(Error::NonFinite { step });
        }
        if step % cfg.record_every == 0 || step == cfg.steps {
            record(
                &mut rec,
                &stepper.state(reduced),
                step as f64 * cfg.dt,
                model,
                diagnostics,
            )?;
        }
    }
    rec.final_state = Some(stepper.state(reduced));
    Ok(rec)
}

fn record(
    rec: &mut TrajectoryRecord,
    state: &LatticeState,
    t: f64,
    model: Model,
    diagnostics: Diagnostics,
) -> Result<()> {
    rec.times.push(t);
    rec.energies.push(model.energy(state));
    if diagnostics.states {
        rec.states.push(state.clone());
    }
    if diagnostics.mode_energies {
        rec.mode_energies.push(fourier::mode_energies(&state.project_to_reduced())?);
    }
    if diagnostics.spectral {
        let spec = spectral::eigen_doubled(&spectral::flaschka(state))?;
        rec.actions.push(action_proxy(&spec));
        rec.gaps.push(spec.gaps().to_vec());
    }
    Ok(())
}

/// Action surrogate `I_j = N γ_j² / (8 ω_j)`, `j = 1..N-1`.
///
/// It coincides with `|z_j|²` through the gap identity
/// `γ_j² = (8/N) ω_j |z_j|²`, and to leading order with the linear action
/// `(X_j² + Y_j²)/2`.
pub fn action_proxy(spec: &SpectrumData) -> Vec<f64> {
    let n = spec.n();
    let table = mode_table(n);
    spec.gaps()
        .iter()
        .enumerate()
        .map(|(idx, g)| n as f64 * g * g / (8.0 * table.omega(idx + 1)))
        .collect()
}

/// Weighted action drift
/// `(1/N) Σ_k [k]^{2(s−1)} e^{2σ[k]} ω_k |I_k(t) − I_k(0)|`.
pub fn weighted_action_drift(i0: &[f64], it: &[f64], s: f64, sigma: f64) -> f64 {
    let n = i0.len() + 1;
    let table = mode_table(n);
    let total: f64 = (1..n)
        .map(|k| {
            let b = table.bracket(k) as f64;
            b.powf(2.0 * (s - 1.0)) * (2.0 * sigma * b).exp() * table.omega(k) * (it[k - 1] - i0[k - 1]).abs()
        })
        .sum();
    total / n as f64
}
