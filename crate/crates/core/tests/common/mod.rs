//! Shared generators for the integration suites.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toda_birkhoff::lattice::LatticeState;
use toda_birkhoff::spectral::{self, FlaschkaCoords};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-amp..amp)).collect()
}

pub fn complex_vec(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp)))
        .collect()
}

/// Random state with zero mean momentum and position.
pub fn reduced_state(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> LatticeState {
    let p = uniform_vec(rng, n, amp);
    let q = uniform_vec(rng, n, amp);
    LatticeState::new(p, q).unwrap().project_to_reduced()
}

/// Random real constrained Flaschka point rescaled to the given weighted norm.
pub fn constrained_flaschka(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> FlaschkaCoords {
    let mut state = reduced_state(rng, n, 1.0);
    // The norm is nearly homogeneous at small amplitude; two rescalings settle it.
    for _ in 0..3 {
        let current = spectral::flaschka(&state).norm(0.0, 0.0);
        state = state.scaled(norm / current);
    }
    spectral::flaschka(&state)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs_diff_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
