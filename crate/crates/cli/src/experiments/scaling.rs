//! Growth of the second differential of the Birkhoff map with `N`.
//!
//! With only the first Fourier mode excited, the quadratic part of the
//! Birkhoff map contains the normal-form coefficient
//! `χ = ω₁ ω₂^{1/2} / (4√(2N) · i(2ω₁ − ω₂))` of the monomial `ξ₁²η₂`. The
//! small divisor `2ω₁ − ω₂ ≈ 2π³/N³` makes the lower bound
//! `‖d²Φ(0)(v, v)‖ / ‖v‖² ≥ 2^s ω₂ / (8|2ω₁ − ω₂|)` grow like `N²`.

use num_complex::Complex64;
use serde::Serialize;
use toda_birkhoff::fourier::{self, ModeCoords};

use crate::config::ExperimentConfig;
use crate::data::linear_fit;
use crate::error::Result;
use crate::output::Series;

/// Quantities for one lattice size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    /// Lattice size.
    pub n: usize,
    /// `ω₁`.
    pub omega1: f64,
    /// `ω₂`.
    pub omega2: f64,
    /// Small divisor `2ω₁ − ω₂`.
    pub divisor: f64,
    /// `|χ|` from the closed form.
    pub chi: f64,
    /// `|χ|` recovered from the cubic Hamiltonian (`null` when other
    /// monomials share the excitation pattern, i.e. `N < 7`).
    pub chi_from_cubic: Option<f64>,
    /// Lower bound on `‖d²Φ(0)(v, v)‖ / ‖v‖²`.
    pub bound: f64,
    /// `|N³(2ω₁ − ω₂) − 2π³|`.
    pub nonresonance_residual: f64,
}

/// Results of a scaling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSummary {
    /// Sobolev exponent `s` entering the bound.
    pub s: f64,
    /// Per-size quantities in config order.
    pub rows: Vec<ScalingRow>,
    /// Slope of `ln bound` against `ln N`.
    pub fitted_exponent: f64,
    /// Whether the residual decreases strictly along increasing `N`.
    pub residual_monotone: bool,
}

/// Evaluates the scaling quantities for one `N ≥ 3`.
pub fn scaling_row(n: usize, s: f64) -> ScalingRow {
    let table = fourier::mode_table(n);
    let (w1, w2) = (table.omega(1), table.omega(2));
    let nf = n as f64;
    let divisor = 2.0 * w1 - w2;
    let coefficient = w1 * w2.sqrt() / (4.0 * (2.0 * nf).sqrt());
    let chi = coefficient / divisor.abs();
    let chi_from_cubic = (n >= 7).then(|| cubic_coefficient(n) / divisor.abs());
    let bound = 2f64.powf(s) * w2 / (8.0 * divisor.abs());
    let pi3 = std::f64::consts::PI.powi(3);
    ScalingRow {
        n,
        omega1: w1,
        omega2: w2,
        divisor,
        chi,
        chi_from_cubic,
        bound,
        nonresonance_residual: (nf.powi(3) * divisor - 2.0 * pi3).abs(),
    }
}

/// Coefficient of `ξ₁²η₂` in the cubic Hamiltonian, read off by evaluating
/// it with only `ξ₁` and `η₂` nonzero.
fn cubic_coefficient(n: usize) -> f64 {
    let (x, y) = (Complex64::new(0.7, 0.0), Complex64::new(1.3, 0.0));
    let zero = Complex64::new(0.0, 0.0);
    // Mode k is stored at index k − 1.
    let mut xi = vec![zero; n - 1];
    let mut eta = vec![zero; n - 1];
    xi[0] = x;
    eta[1] = y;
    let m = ModeCoords::new(xi, eta).expect("matching lengths");
    (fourier::h1_complex(&m) / (x * x * y)).norm()
}

/// Runs the sweep over `cfg.n_list`.
pub fn run(cfg: &ExperimentConfig) -> Result<(ScalingSummary, Vec<Series>)> {
    let rows: Vec<ScalingRow> = cfg.n_list.iter().map(|&n| scaling_row(n, cfg.s)).collect();
    let ln_n: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ln_b: Vec<f64> = rows.iter().map(|r| r.bound.ln()).collect();
    let (fitted_exponent, _) = linear_fit(&ln_n, &ln_b);
    let mut sorted: Vec<&ScalingRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let residual_monotone = sorted
        .windows(2)
        .all(|w| w[1].nonresonance_residual < w[0].nonresonance_residual);
    let mut bound = Series::new("scaling_bound");
    let mut chi = Series::new("scaling_chi");
    let mut residual = Series::new("scaling_residual");
    for r in &rows {
        bound.push(r.n as f64, 0, r.bound);
        chi.push(r.n as f64, 0, r.chi);
        residual.push(r.n as f64, 0, r.nonresonance_residual);
    }
    Ok((
        ScalingSummary {
            s: cfg.s,
            rows,
            fitted_exponent,
            residual_monotone,
        },
        vec![bound, chi, residual],
    ))
}
