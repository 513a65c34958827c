//! Spectra and gaps of the doubled Jacobi matrix.
//!
//! `spectrum` dumps the eigenvalues of the equilibrium (sample 0) and of
//! random states; `gaps` tracks the gaps of random states along Toda
//! trajectories, where they are conserved.

use serde::Serialize;
use toda_birkhoff::dynamics::{self, Diagnostics, Model};
use toda_birkhoff::lattice::LatticeState;
use toda_birkhoff::spectral;

use crate::config::ExperimentConfig;
use crate::data::{cell_rng, random_state};
use crate::error::Result;
use crate::output::Series;

/// Spectrum results for one lattice size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    /// Lattice size.
    pub n: usize,
    /// `max |λ_i − λ⁰_i|` at equilibrium against the closed form.
    pub closed_form_error: f64,
    /// Largest equilibrium gap.
    pub equilibrium_max_gap: f64,
    /// Largest eigenpair residual over all samples.
    pub max_residual: f64,
    /// Largest gap over the random samples.
    pub random_max_gap: f64,
}

/// Results of a spectrum run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    /// Per-size results in config order.
    pub rows: Vec<SpectrumRow>,
}

/// Eigenvalues of the equilibrium and of `cfg.samples` random states per size.
pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<(SpectrumSummary, Vec<Series>)> {
    let cells = parallel_cells(&cfg.n_list, |cell, n| spectrum_cell(cfg, cell as u64, n));
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for c in cells {
        let (row, s) = c?;
        rows.push(row);
        series.push(s);
    }
    Ok((SpectrumSummary { rows }, series))
}

fn spectrum_cell(cfg: &ExperimentConfig, cell: u64, n: usize) -> Result<(SpectrumRow, Series)> {
    let mut rng = cell_rng(cfg.seed, cell);
    let mut series = Series::new(format!("spectrum_N{n}"));
    let eq = spectral::eigen_doubled(&spectral::FlaschkaCoords::zero(n)?)?;
    let free = spectral::unperturbed_spectrum(n)?;
    let closed_form_error = eq
        .lambdas()
        .iter()
        .zip(free.lambdas())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let equilibrium_max_gap = eq.gaps().iter().fold(0.0_f64, |m, g| m.max(g.abs()));
    let mut max_residual = eq.residual();
    series.push_all(0.0, 0, eq.lambdas());
    let mut random_max_gap = 0.0_f64;
    for sample in 1..=cfg.samples {
        let state = random_state(&mut rng, n, cfg.specific_energy)?;
        let spec = spectral::eigen_doubled(&spectral::flaschka(&state))?;
        max_residual = max_residual.max(spec.residual());
        random_max_gap = spec.gaps().iter().fold(random_max_gap, |m, g| m.max(g.abs()));
        series.push_all(sample as f64, 0, spec.lambdas());
    }
    Ok((
        SpectrumRow {
            n,
            closed_form_error,
            equilibrium_max_gap,
            max_residual,
            random_max_gap,
        },
        series,
    ))
}

/// Gap-tracking results for one lattice size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapsRow {
    /// Lattice size.
    pub n: usize,
    /// Time step used.
    pub dt: f64,
    /// Final time.
    pub horizon: f64,
    /// Largest initial gap over the samples.
    pub max_gap: f64,
    /// `max_{sample, t, j} |γ_j(t) − γ_j(0)|`.
    pub max_gap_drift: f64,
    /// Largest relative Toda energy drift over the samples.
    pub max_energy_drift: f64,
}

/// Results of a gaps run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapsSummary {
    /// Specific energy of the random states.
    pub specific_energy: f64,
    /// Per-size results in config order.
    pub rows: Vec<GapsRow>,
}

/// Gaps of random states tracked along Toda trajectories.
pub fn run_gaps(cfg: &ExperimentConfig) -> Result<(GapsSummary, Vec<Series>)> {
    let cells = parallel_cells(&cfg.n_list, |cell, n| gaps_cell(cfg, cell as u64, n));
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for c in cells {
        let (row, s) = c?;
        rows.push(row);
        series.extend(s);
    }
    Ok((
        GapsSummary {
            specific_energy: cfg.specific_energy,
            rows,
        },
        series,
    ))
}

fn gaps_cell(cfg: &ExperimentConfig, cell: u64, n: usize) -> Result<(GapsRow, Vec<Series>)> {
    let mut rng = cell_rng(cfg.seed, cell);
    let icfg = cfg.integrator.to_config(n);
    let mut row = GapsRow {
        n,
        dt: icfg.dt,
        horizon: icfg.dt * icfg.steps as f64,
        max_gap: 0.0,
        max_gap_drift: 0.0,
        max_energy_drift: 0.0,
    };
    let mut series = Vec::new();
    for sample in 0..cfg.samples {
        let state: LatticeState = random_state(&mut rng, n, cfg.specific_energy)?;
        let mut s = Series::new(format!("gaps_N{n}_sample{sample}"));
        if icfg.steps == 0 {
            let gaps = spectral::gaps_of_state(&state)?;
            row.max_gap = gaps.iter().fold(row.max_gap, |m, g| m.max(*g));
            s.push_all(0.0, 1, &gaps);
        } else {
            let rec = dynamics::integrate(
                &state,
                Model::Toda,
                &icfg,
                Diagnostics {
                    states: false,
                    mode_energies: false,
                    spectral: true,
                },
            )?;
            row.max_gap = rec.gaps[0].iter().fold(row.max_gap, |m, g| m.max(*g));
            row.max_gap_drift = rec.gap_drift().into_iter().fold(row.max_gap_drift, f64::max);
            row.max_energy_drift = row.max_energy_drift.max(rec.relative_energy_drift());
            for (t, g) in rec.times.iter().zip(&rec.gaps) {
                s.push_all(*t, 1, g);
            }
        }
        series.push(s);
    }
    Ok((row, series))
}

/// Runs `f(cell, n)` for every size on its own thread and returns the
/// results in input order.
pub(crate) fn parallel_cells<T: Send>(ns: &[usize], f: impl Fn(usize, usize) -> T + Sync) -> Vec<T> {
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = ns
            .iter()
            .enumerate()
            .map(|(cell, &n)| scope.spawn(move || f(cell, n)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("cell panicked")).collect()
    })
}
