//! Persistence of a low-mode packet.
//!
//! The packet datum of [`crate::data::packet_datum`] is integrated under each
//! configured model. The run records the specific mode energies `𝓔_k(t)`,
//! their running time averages, the spectral gaps and the weighted drift of
//! the action proxy, and reports how the profile compares with the
//! exponential envelopes `μ⁴ e^{−2σk}`.

use serde::Serialize;
use toda_birkhoff::dynamics::{self, Diagnostics, Model};
use toda_birkhoff::fourier;

use crate::config::{ExperimentConfig, ModelSpec};
use crate::data::{linear_fit, packet_datum};
use crate::error::Result;
use crate::output::Series;

/// Per-model results of a packet run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacketModelSummary {
    /// Model label.
    pub model: String,
    /// Time step.
    pub dt: f64,
    /// Number of steps.
    pub steps: usize,
    /// Final time.
    pub horizon: f64,
    /// Relative energy drift of the integrated Hamiltonian.
    pub energy_drift: f64,
    /// Largest mode index in the slope fits.
    pub fit_k_max: usize,
    /// Slope of `ln⟨𝓔_k⟩` against `k` at the final time.
    pub profile_slope_final: f64,
    /// Largest (least steep) such slope over the fit window in time.
    pub profile_slope_worst: f64,
    /// `max_{t, k ≤ N/2} 𝓔_k(t) / (μ⁴ e^{−2σk})`.
    pub envelope_constant: f64,
    /// `max_{t, k ≤ N/2} 𝓔_k(t) / (R² μ⁴ e^{−2σk})`.
    pub integrable_bound_ratio: f64,
    /// Smallest `C` with `𝓔_k(t) ≤ R²(1 + C R) μ⁴ e^{−2σk}` on the run.
    pub fitted_integrable_constant: f64,
    /// `max_{t, k ≤ N/2} 𝓔_k(t) / (16 R² μ⁴ e^{−2σk} / k^{2s})`.
    pub near_integrable_bound_ratio: f64,
    /// First recorded time with that ratio above 1.
    pub first_violation_time: Option<f64>,
    /// `first_violation_time · R² μ⁴`.
    pub scaled_violation_time: Option<f64>,
    /// `max_t` of the weighted action-proxy drift.
    pub action_drift: Option<f64>,
    /// `action_drift / (R² μ⁵)`.
    pub fitted_action_constant: Option<f64>,
    /// `max_{t, j} |γ_j(t) − γ_j(0)|`.
    pub gap_drift: Option<f64>,
}

/// Results of a packet run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacketSummary {
    /// Lattice size.
    pub n: usize,
    /// Packet amplitude `R`.
    pub amplitude: f64,
    /// Weight `σ`.
    pub sigma: f64,
    /// Sobolev exponent `s`.
    pub s: f64,
    /// `μ = 1/N`.
    pub mu: f64,
    /// Phase of the datum.
    pub phase: f64,
    /// Initial specific energy of modes 1 and `N − 1`.
    pub initial_specific_energy: f64,
    /// One entry per model, in config order.
    pub models: Vec<PacketModelSummary>,
}

/// Runs every configured model concurrently.
pub fn run(cfg: &ExperimentConfig) -> Result<(PacketSummary, Vec<Series>)> {
    let cells: Vec<Result<(PacketModelSummary, Vec<Series>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .models
            .iter()
            .map(|&spec| scope.spawn(move || run_model(cfg, spec)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("packet cell panicked")).collect()
    });
    let mut models = Vec::new();
    let mut series = Vec::new();
    for cell in cells {
        let (m, s) = cell?;
        models.push(m);
        series.extend(s);
    }
    let n = cfg.n;
    let mu = 1.0 / n as f64;
    Ok((
        PacketSummary {
            n,
            amplitude: cfg.amplitude,
            sigma: cfg.sigma,
            s: cfg.s,
            mu,
            phase: cfg.phase,
            initial_specific_energy: cfg.amplitude.powi(2) * (-2.0 * cfg.sigma).exp() * mu.powi(4),
            models,
        },
        series,
    ))
}

/// Integrates one model from the packet datum.
pub fn run_model(cfg: &ExperimentConfig, spec: ModelSpec) -> Result<(PacketModelSummary, Vec<Series>)> {
    let n = cfg.n;
    let half = n / 2;
    let (r, sigma, s) = (cfg.amplitude, cfg.sigma, cfg.s);
    let mu = 1.0 / n as f64;
    let model: Model = spec.model();
    let icfg = cfg.integrator.to_config(n);
    let datum = packet_datum(n, r, sigma, cfg.phase)?;
    let rec = dynamics::integrate(
        &datum,
        model,
        &icfg,
        Diagnostics {
            states: false,
            mode_energies: true,
            spectral: cfg.spectral,
        },
    )?;
    let label = spec.label();
    let samples = rec.times.len();
    let horizon = *rec.times.last().expect("at least one sample");

    // Specific energies 𝓔_k(t), k = 1..N/2.
    let nf = n as f64;
    let modes: Vec<Vec<f64>> = rec
        .mode_energies
        .iter()
        .map(|e| e[..half].iter().map(|x| x / nf).collect())
        .collect();
    let sample_dt = icfg.dt * icfg.record_every as f64;
    let mut averages = vec![vec![0.0; half]; samples];
    for k in 0..half {
        let series: Vec<f64> = modes.iter().map(|row| row[k]).collect();
        let avg = if samples > 1 {
            fourier::time_average(&series, sample_dt)?
        } else {
            series
        };
        for (row, v) in averages.iter_mut().zip(avg) {
            row[k] = v;
        }
    }

    let k_max = cfg.fit.k_max.unwrap_or(n / 4).max(2);
    let ks: Vec<f64> = (1..=k_max).map(|k| k as f64).collect();
    let slope_at = |row: &[f64]| {
        let logs: Vec<f64> = row[..k_max].iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
        linear_fit(&ks, &logs).0
    };
    let t_from = cfg.fit.t_from * horizon;
    let profile_slope_final = slope_at(&averages[samples - 1]);
    let profile_slope_worst = rec
        .times
        .iter()
        .zip(&averages)
        .filter(|(t, _)| **t > 0.0 && **t >= t_from)
        .map(|(_, row)| slope_at(row))
        .fold(f64::NEG_INFINITY, f64::max);

    let envelope = |k: usize| mu.powi(4) * (-2.0 * sigma * k as f64).exp();
    let mut envelope_constant = 0.0_f64;
    let mut near_ratio = 0.0_f64;
    let mut first_violation = None;
    for (t, row) in rec.times.iter().zip(&modes) {
        let mut worst_here = 0.0_f64;
        for (idx, &e) in row.iter().enumerate() {
            let k = idx + 1;
            envelope_constant = envelope_constant.max(e / envelope(k));
            let bound = 16.0 * r * r * envelope(k) / (k as f64).powf(2.0 * s);
            worst_here = worst_here.max(e / bound);
        }
        near_ratio = near_ratio.max(worst_here);
        if worst_here > 1.0 && first_violation.is_none() {
            first_violation = Some(*t);
        }
    }
    let integrable_ratio = envelope_constant / (r * r);

    let mut action_series = Series::new(format!("packet_{label}_action_drift"));
    let mut gap_series = Series::new(format!("packet_{label}_gaps"));
    let (action_drift, gap_drift) = if cfg.spectral {
        let i0 = &rec.actions[0];
        let mut worst = 0.0_f64;
        for (t, it) in rec.times.iter().zip(&rec.actions) {
            let d = dynamics::weighted_action_drift(i0, it, s, sigma);
            worst = worst.max(d);
            action_series.push(*t, 0, d);
        }
        for (t, g) in rec.times.iter().zip(&rec.gaps) {
            gap_series.push_all(*t, 1, g);
        }
        let gd = rec.gap_drift().into_iter().fold(0.0, f64::max);
        (Some(worst), Some(gd))
    } else {
        (None, None)
    };

    let mut energy_series = Series::new(format!("packet_{label}_energy"));
    let mut mode_series = Series::new(format!("packet_{label}_modes"));
    let mut avg_series = Series::new(format!("packet_{label}_averages"));
    for i in 0..samples {
        let t = rec.times[i];
        energy_series.push(t, 0, rec.energies[i]);
        mode_series.push_all(t, 1, &modes[i]);
        avg_series.push_all(t, 1, &averages[i]);
    }
    let mut series = vec![energy_series, mode_series, avg_series];
    if cfg.spectral {
        series.push(gap_series);
        series.push(action_series);
    }

    let summary = PacketModelSummary {
        model: label,
        dt: icfg.dt,
        steps: icfg.steps,
        horizon,
        energy_drift: rec.relative_energy_drift(),
        fit_k_max: k_max,
        profile_slope_final,
        profile_slope_worst,
        envelope_constant,
        integrable_bound_ratio: integrable_ratio,
        fitted_integrable_constant: (integrable_ratio - 1.0) / r,
        near_integrable_bound_ratio: near_ratio,
        first_violation_time: first_violation,
        scaled_violation_time: first_violation.map(|t| t * r * r * mu.powi(4)),
        action_drift,
        fitted_action_constant: action_drift.map(|d| d / (r * r * mu.powi(5))),
        gap_drift,
    };
    Ok((summary, series))
}
