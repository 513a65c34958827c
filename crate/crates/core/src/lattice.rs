//! Canonical states of the periodic chain and its Hamiltonians.
//!
//! A chain of `N` particles with positions `q_j` and momenta `p_j` is indexed
//! cyclically, so `q_N ≡ q_0`. The Toda Hamiltonian is
//! `½Σp_j² + Σ e^{q_j − q_{j+1}}` and the FPU Hamiltonian is
//! `Σ p_j²/2 + U(q_j − q_{j+1})` with `U(x) = x²/2 + x³/6 + βx⁴/24`.
//! Expanding the exponential gives the Taylor pieces
//! `H_l(q) = Σ (q_j − q_{j+1})^{l+2}/(l+2)!`.

use crate::sum::csum;
use crate::{Error, Result};

/// Positions and momenta of a periodic chain.
///
/// The `reduced` flag records that the state was constructed on, or projected
/// onto, the invariant subspace `Σp = Σq = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    p: Vec<f64>,
    q: Vec<f64>,
    reduced: bool,
}

impl LatticeState {
    /// Builds a state from momenta and positions.
    ///
    /// The state is flagged as reduced when both means already vanish to
    /// within `1e-12·N·max|·|`.
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a chain needs at least 2 particles, got {}",
                p.len()
            )));
        }
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                found: q.len(),
            });
        }
        if p.iter().chain(q.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let reduced = mean_is_zero(&p) && mean_is_zero(&q);
        Ok(Self { p, q, reduced })
    }

    /// The equilibrium `p = q = 0`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    /// Subtracts the means of `p` and `q`, returning a reduced state.
    pub fn project_to_reduced(&self) -> Self {
        let center = |v: &[f64]| {
            let m = csum(v.iter().copied()) / v.len() as f64;
            v.iter().map(|x| x - m).collect::<Vec<_>>()
        };
        Self {
            p: center(&self.p),
            q: center(&self.q),
            reduced: true,
        }
    }

    /// Number of particles `N`.
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Momenta.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Positions.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Whether the state lies on the zero-mean subspace.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Re-evaluates the zero-mean test on the current coordinates.
    pub fn check_reduced(&self) -> bool {
        mean_is_zero(&self.p) && mean_is_zero(&self.q)
    }

    /// Consumes the state, returning `(p, q)`.
    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.p, self.q)
    }

    /// Scales both `p` and `q` by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            p: self.p.iter().map(|x| x * factor).collect(),
            q: self.q.iter().map(|x| x * factor).collect(),
            reduced: self.reduced,
        }
    }

    /// Euclidean size `(Σ p² + q²)^{1/2}`.
    pub fn euclidean_norm(&self) -> f64 {
        csum(self.p.iter().chain(self.q.iter()).map(|x| x * x)).sqrt()
    }

    /// The cyclic differences `q_j − q_{j+1}`.
    pub fn differences(&self) -> Vec<f64> {
        differences(&self.q)
    }

    pub(crate) fn from_parts_unchecked(p: Vec<f64>, q: Vec<f64>, reduced: bool) -> Self {
        Self { p, q, reduced }
    }
}

fn mean_is_zero(v: &[f64]) -> bool {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    csum(v.iter().copied()).abs() <= 1e-12 * v.len() as f64 * max
}

/// The cyclic differences `q_j − q_{j+1}`, `j = 0..N-1`.
pub fn differences(q: &[f64]) -> Vec<f64> {
    let n = q.len();
    (0..n).map(|j| q[j] - q[(j + 1) % n]).collect()
}

fn kinetic(p: &[f64]) -> f64 {
    0.5 * csum(p.iter().map(|x| x * x))
}

/// Toda energy `½Σp_j² + Σ e^{q_j − q_{j+1}}`, including the constant `N`.
pub fn toda_energy(state: &LatticeState) -> f64 {
    let pot = csum(state.differences().into_iter().map(f64::exp));
    kinetic(&state.p) + pot
}

/// Toda energy relative to equilibrium, `toda_energy − N`.
///
/// Evaluated with `expm1` so that small-amplitude states keep full relative
/// precision.
pub fn toda_energy_relative(state: &LatticeState) -> f64 {
    let pot = csum(state.differences().into_iter().map(f64::exp_m1));
    kinetic(&state.p) + pot
}

/// The FPU pair potential `U(x) = x²/2 + x³/6 + βx⁴/24`.
pub fn fpu_potential(x: f64, beta: f64) -> f64 {
    let x2 = x * x;
    x2 / 2.0 + x2 * x / 6.0 + beta * x2 * x2 / 24.0
}

/// FPU energy `Σ p_j²/2 + U(q_j − q_{j+1})`.
pub fn fpu_energy(state: &LatticeState, beta: f64) -> f64 {
    let pot = csum(
        state
            .differences()
            .into_iter()
            .map(|x| fpu_potential(x, beta)),
    );
    kinetic(&state.p) + pot
}

/// Harmonic part `H₀ = Σ (p_j² + (q_j − q_{j+1})²)/2`.
pub fn h0(state: &LatticeState) -> f64 {
    let pot = 0.5 * csum(state.differences().into_iter().map(|x| x * x));
    kinetic(&state.p) + pot
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn taylor_piece(q: &[f64], l: u32) -> f64 {
    let power = l + 2;
    let norm = factorial(power);
    csum(differences(q).into_iter().map(|x| x.powi(power as i32))) / norm
}

/// Cubic piece `H₁(q) = Σ (q_j − q_{j+1})³/6`.
pub fn h1(q: &[f64]) -> f64 {
    taylor_piece(q, 1)
}

/// Higher Taylor piece `H_l(q) = Σ (q_j − q_{j+1})^{l+2}/(l+2)!` for `l ≥ 2`.
pub fn h_l(q: &[f64], l: u32) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!(
            "Taylor piece index must be at least 2, got {l}"
        )));
    }
    Ok(taylor_piece(q, l))
}
