//! Initial data, seeding and small fitting helpers shared by the experiments.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toda_birkhoff::lattice::{self, LatticeState};

use crate::error::{CliError, Result};

/// Seeded portable generator for cell `cell` of a run with seed `seed`.
pub fn cell_rng(seed: u64, cell: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell);
    rng
}

/// Random reduced state with `H₀ / N = specific_energy`.
///
/// Momenta and positions are drawn uniformly, projected to zero mean and
/// rescaled; `H₀` is quadratic, so one rescaling hits the target exactly up
/// to rounding.
pub fn random_state(rng: &mut ChaCha8Rng, n: usize, specific_energy: f64) -> Result<LatticeState> {
    let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let state = LatticeState::new(p, q)?.project_to_reduced();
    let h0 = lattice::h0(&state);
    if h0 == 0.0 {
        return Ok(state);
    }
    Ok(state.scaled((specific_energy * n as f64 / h0).sqrt()))
}

/// Low-mode packet: only the modes `1` and `N − 1` are excited, through the
/// momenta, with specific energies `𝓔₁ = 𝓔_{N−1} = R² e^{−2σ} μ⁴`, `μ = 1/N`.
///
/// The Fourier coefficients are `p̂₁ = c e^{iφ}` and `p̂_{N−1} = c e^{−iφ}`
/// with `c² = 2N R² e^{−2σ} μ⁴`, which gives the real momenta
/// `p_j = 2c cos(2πj/N − φ) / √N` and zero positions.
pub fn packet_datum(n: usize, amplitude: f64, sigma: f64, phase: f64) -> Result<LatticeState> {
    if n < 3 {
        return Err(CliError::config("n", "the packet needs N ≥ 3"));
    }
    let nf = n as f64;
    let mu = 1.0 / nf;
    let c = (2.0 * nf * amplitude * amplitude * (-2.0 * sigma).exp() * mu.powi(4)).sqrt();
    let p: Vec<f64> = (0..n)
        .map(|j| 2.0 * c * (2.0 * PI * j as f64 / nf - phase).cos() / nf.sqrt())
        .collect();
    Ok(LatticeState::new(p, vec![0.0; n])?.project_to_reduced())
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
