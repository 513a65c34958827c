//! Discrete Fourier transform, linear Birkhoff variables and weighted norms.
//!
//! Conventions:
//!
//! - `û_k = N^{-1/2} Σ_j u_j e^{2πijk/N}` (unitary, positive exponent).
//! - `ω_k = 2 sin(kπ/N)` and `[k]_N = min(|k|, |N − k|)` after reducing `k` mod `N`.
//! - `ξ_k = (p̂_k + iω_k q̂_k)/√(2ω_k)`, `η_k = (p̂_{N−k} − iω_k q̂_{N−k})/√(2ω_k)`.
//! - `X_k = (ξ_k + η_k)/√2`, `Y_k = (ξ_k − η_k)/(i√2)`.
//!
//! Mode vectors are stored for `k = 1..N-1` at index `k − 1`; the `k = 0` mode
//! is absent because the coordinates live on the zero-mean subspace.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::lattice::LatticeState;
use crate::sum::csum;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Unitary DFT with the positive-exponent convention.
///
/// Uses an FFT when `N` is a power of two, and the direct sum otherwise.
pub fn dft(u: &[Complex64]) -> Vec<Complex64> {
    transform(u, 1.0)
}

/// Inverse of [`dft`].
pub fn idft(u: &[Complex64]) -> Vec<Complex64> {
    transform(u, -1.0)
}

/// Direct `O(N²)` evaluation of [`dft`], kept as the reference path.
pub fn dft_direct(u: &[Complex64]) -> Vec<Complex64> {
    direct(u, 1.0)
}

fn transform(u: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = u.len();
    if n >= 16 && n.is_power_of_two() {
        let mut planner = FftPlanner::new();
        // rustfft's forward transform uses e^{-2πi jk/N}.
        let fft = if sign > 0.0 {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let mut buf = u.to_vec();
        fft.process(&mut buf);
        let scale = 1.0 / (n as f64).sqrt();
        buf.iter_mut().for_each(|x| *x *= scale);
        buf
    } else {
        direct(u, sign)
    }
}

fn direct(u: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = u.len();
    if n == 0 {
        return Vec::new();
    }
    let scale = 1.0 / (n as f64).sqrt();
    let roots: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, sign * 2.0 * PI * m as f64 / n as f64))
        .collect();
    (0..n)
        .map(|k| {
            let s: Complex64 = u
                .iter()
                .enumerate()
                .map(|(j, x)| x * roots[(j * k) % n])
                .sum();
            s * scale
        })
        .collect()
}

/// DFT of a real vector.
pub fn dft_real(u: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    dft(&c)
}

/// Circular convolution `(u ∗ v)_j = Σ_k u_k v_{j−k}` with periodic wrap.
pub fn circular_convolution(u: &[Complex64], v: &[Complex64]) -> Result<Vec<Complex64>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let n = u.len();
    Ok((0..n)
        .map(|j| (0..n).map(|k| u[k] * v[(j + n - k) % n]).sum())
        .collect())
}

/// Per-`N` table of frequencies `ω_k` and distances `[k]_N`, `k = 0..N-1`.
#[derive(Debug, Clone)]
pub struct ModeTable {
    n: usize,
    omega: Vec<f64>,
    bracket: Vec<usize>,
}

impl ModeTable {
    fn build(n: usize) -> Self {
        let bracket: Vec<usize> = (0..n).map(|k| k.min(n - k)).collect();
        // Evaluating at [k] makes ω_k = ω_{N−k} hold bit for bit.
        let omega = bracket
            .iter()
            .map(|&b| 2.0 * (b as f64 * PI / n as f64).sin())
            .collect();
        Self { n, omega, bracket }
    }

    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `ω_k` for `k` reduced mod `N`.
    pub fn omega(&self, k: usize) -> f64 {
        self.omega[k % self.n]
    }

    /// `[k]_N` for `k` reduced mod `N`.
    pub fn bracket(&self, k: usize) -> usize {
        self.bracket[k % self.n]
    }

    /// Largest frequency `max_k ω_k`.
    pub fn max_omega(&self) -> f64 {
        self.omega.iter().copied().fold(0.0, f64::max)
    }
}

/// Shared, lazily built [`ModeTable`] for `n`.
pub fn mode_table(n: usize) -> Arc<ModeTable> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<ModeTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("mode table lock").get(&n) {
        return Arc::clone(t);
    }
    let mut w = cache.write().expect("mode table lock");
    Arc::clone(w.entry(n).or_insert_with(|| Arc::new(ModeTable::build(n))))
}

/// `ω_k = 2 sin(kπ/N)` for `1 ≤ k ≤ N − 1`.
pub fn omega(n: usize, k: usize) -> Result<f64> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "mode index {k} outside 1..{} for N = {n}",
            n.saturating_sub(1)
        )));
    }
    Ok(mode_table(n).omega(k))
}

/// `[k]_N = min(k mod N, N − k mod N)`.
pub fn bracket(n: usize, k: i64) -> usize {
    let r = k.rem_euclid(n as i64) as usize;
    r.min(n - r)
}

/// Complex Fourier/linear-Birkhoff coordinates `(ξ, η)`, `k = 1..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoords {
    n: usize,
    xi: Vec<Complex64>,
    eta: Vec<Complex64>,
}

impl ModeCoords {
    /// Builds coordinates from `ξ_k`, `η_k` stored at index `k − 1`.
    pub fn new(xi: Vec<Complex64>, eta: Vec<Complex64>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidArgument("need N ≥ 2".into()));
        }
        if xi.len() != eta.len() {
            return Err(Error::DimensionMismatch {
                expected: xi.len(),
                found: eta.len(),
            });
        }
        Ok(Self {
            n: xi.len() + 1,
            xi,
            eta,
        })
    }

    /// All-zero coordinates for a chain of `n` sites.
    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("need N ≥ 2".into()));
        }
        Ok(Self {
            n,
            xi: vec![Complex64::new(0.0, 0.0); n - 1],
            eta: vec![Complex64::new(0.0, 0.0); n - 1],
        })
    }

    /// Real coordinates `η = conj ξ`.
    pub fn real(xi: Vec<Complex64>) -> Result<Self> {
        let eta = xi.iter().map(|z| z.conj()).collect();
        Self::new(xi, eta)
    }

    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `ξ_k` at index `k − 1`.
    pub fn xi(&self) -> &[Complex64] {
        &self.xi
    }

    /// `η_k` at index `k − 1`.
    pub fn eta(&self) -> &[Complex64] {
        &self.eta
    }

    /// `ξ_k` for `k` in `1..N`.
    pub fn xi_at(&self, k: usize) -> Complex64 {
        self.xi[k - 1]
    }

    /// `η_k` for `k` in `1..N`.
    pub fn eta_at(&self, k: usize) -> Complex64 {
        self.eta[k - 1]
    }

    /// Whether `η_k = conj ξ_k` for all `k` to within `tol` (absolute).
    pub fn is_real(&self, tol: f64) -> bool {
        self.xi
            .iter()
            .zip(&self.eta)
            .all(|(x, e)| (x.conj() - e).norm() <= tol)
    }

    /// Linear combination `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let add = |a: &[Complex64], b: &[Complex64]| {
            a.iter().zip(b).map(|(x, y)| x + c * y).collect::<Vec<_>>()
        };
        Ok(Self {
            n: self.n,
            xi: add(&self.xi, &other.xi),
            eta: add(&self.eta, &other.eta),
        })
    }

    /// Multiplies every coordinate by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            xi: self.xi.iter().map(|x| x * c).collect(),
            eta: self.eta.iter().map(|x| x * c).collect(),
        }
    }

    /// Converts to `(X, Y)`. The result is real only for real coordinates; the
    /// returned vectors hold the complex values.
    pub fn to_xy_complex(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let r = std::f64::consts::SQRT_2;
        let x = self.xi.iter().zip(&self.eta).map(|(a, b)| (a + b) / r).collect();
        let y = self
            .xi
            .iter()
            .zip(&self.eta)
            .map(|(a, b)| (a - b) / (I * r))
            .collect();
        (x, y)
    }

    /// Converts real coordinates to [`XYCoords`].
    pub fn to_xy(&self) -> Result<XYCoords> {
        if !self.is_real(1e-14 * (1.0 + self.max_abs())) {
            return Err(Error::NotReal);
        }
        let (x, y) = self.to_xy_complex();
        Ok(XYCoords {
            n: self.n,
            x: x.iter().map(|z| z.re).collect(),
            y: y.iter().map(|z| z.re).collect(),
        })
    }

    fn max_abs(&self) -> f64 {
        self.xi
            .iter()
            .chain(&self.eta)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Weighted norm `‖·‖_{s,σ,ν}`; see [`NormParams`].
    pub fn sobolev_norm(&self, params: &NormParams) -> f64 {
        let table = mode_table(self.n);
        let total = csum((1..self.n).map(|k| {
            let w = params.weight(table.bracket(k));
            let xi = self.xi[k - 1].norm_sqr();
            let eta = self.eta[k - 1].norm_sqr();
            w * table.omega(k) * (xi + eta) / 2.0
        }));
        (total / self.n as f64).sqrt()
    }
}

/// Real linear Birkhoff variables `(X, Y)`, `k = 1..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct XYCoords {
    n: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl XYCoords {
    /// Builds coordinates from `X_k`, `Y_k` stored at index `k − 1`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("need N ≥ 2".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        Ok(Self {
            n: x.len() + 1,
            x,
            y,
        })
    }

    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `X_k` at index `k − 1`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// `Y_k` at index `k − 1`.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Converts to `(ξ, η)` with `ξ = (X + iY)/√2`, `η = (X − iY)/√2`.
    pub fn to_modes(&self) -> ModeCoords {
        let r = std::f64::consts::SQRT_2;
        let xi = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(&a, &b)| Complex64::new(a, b) / r)
            .collect();
        let eta = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(&a, &b)| Complex64::new(a, -b) / r)
            .collect();
        ModeCoords {
            n: self.n,
            xi,
            eta,
        }
    }

    /// Weighted norm `‖(X,Y)‖_{s,σ,ν}`; see [`NormParams`].
    pub fn sobolev_norm(&self, params: &NormParams) -> f64 {
        let table = mode_table(self.n);
        let total = csum((1..self.n).map(|k| {
            let w = params.weight(table.bracket(k));
            w * table.omega(k) * (self.x[k - 1].powi(2) + self.y[k - 1].powi(2)) / 2.0
        }));
        (total / self.n as f64).sqrt()
    }
}

/// Parameters of the Sobolev-analytic (or Gevrey) mode norm
/// `‖(X,Y)‖² = (1/N) Σ_k [k]^{2s} e^{2σ[k]^ν} ω_k (|X_k|² + |Y_k|²)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormParams {
    s: f64,
    sigma: f64,
    nu: f64,
}

impl NormParams {
    /// Analytic case `ν = 1`.
    pub fn new(s: f64, sigma: f64) -> Result<Self> {
        Self::gevrey(s, sigma, 1.0)
    }

    /// General Gevrey exponent `ν ∈ [0, 1]`.
    pub fn gevrey(s: f64, sigma: f64, nu: f64) -> Result<Self> {
        if !(s >= 0.0 && sigma >= 0.0 && (0.0..=1.0).contains(&nu)) {
            return Err(Error::InvalidArgument(format!(
                "norm parameters out of range: s={s}, sigma={sigma}, nu={nu}"
            )));
        }
        Ok(Self { s, sigma, nu })
    }

    /// Sobolev index `s`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Analyticity width `σ`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Gevrey exponent `ν`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// The weight `[k]^{2s} e^{2σ[k]^ν}`.
    pub fn weight(&self, bracket: usize) -> f64 {
        let b = bracket as f64;
        b.powf(2.0 * self.s) * (2.0 * self.sigma * b.powf(self.nu)).exp()
    }
}

impl Default for NormParams {
    fn default() -> Self {
        Self {
            s: 0.0,
            sigma: 0.0,
            nu: 1.0,
        }
    }
}

/// Norm of a lattice vector through its Fourier coefficients,
/// `‖u‖² = (1/N) Σ_k max(1, [k]^{2s}) e^{2σ[k]} |û_k|²`.
///
/// Unlike [`NormParams`] norms, no `ω_k` weight appears.
pub fn vector_norm(u: &[f64], s: f64, sigma: f64) -> f64 {
    let n = u.len();
    let hat = dft_real(u);
    let total = csum(hat.iter().enumerate().map(|(k, c)| {
        let b = bracket(n, k as i64) as f64;
        (b.powf(2.0 * s)).max(1.0) * (2.0 * sigma * b).exp() * c.norm_sqr()
    }));
    (total / n as f64).sqrt()
}

fn fourier_pq(state: &LatticeState) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if !state.is_reduced() && !state.check_reduced() {
        return Err(Error::NotReduced);
    }
    Ok((dft_real(state.p()), dft_real(state.q())))
}

/// `(ξ, η)` of a reduced state.
pub fn to_modes(state: &LatticeState) -> Result<ModeCoords> {
    let (ph, qh) = fourier_pq(state)?;
    Ok(modes_from_fourier(&ph, &qh))
}

/// `(ξ, η)` from Fourier coefficients `(p̂, q̂)` of length `N` (the `k = 0`
/// entries are ignored).
pub fn modes_from_fourier(ph: &[Complex64], qh: &[Complex64]) -> ModeCoords {
    let n = ph.len();
    let table = mode_table(n);
    let mut xi = Vec::with_capacity(n - 1);
    let mut eta = Vec::with_capacity(n - 1);
    for k in 1..n {
        let w = table.omega(k);
        let d = (2.0 * w).sqrt();
        xi.push((ph[k] + I * w * qh[k]) / d);
        eta.push((ph[n - k] - I * w * qh[n - k]) / d);
    }
    ModeCoords { n, xi, eta }
}

/// Fourier coefficients `(p̂, q̂)` of length `N` from `(ξ, η)`, with
/// `p̂_0 = q̂_0 = 0`.
pub fn fourier_from_modes(m: &ModeCoords) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = m.n;
    let table = mode_table(n);
    let mut ph = vec![Complex64::new(0.0, 0.0); n];
    let mut qh = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n {
        let w = table.omega(k);
        let xi = m.xi_at(k);
        let eta = m.eta_at(n - k);
        ph[k] = (w / 2.0).sqrt() * (xi + eta);
        qh[k] = (xi - eta) / (I * (2.0 * w).sqrt());
    }
    (ph, qh)
}

/// Complex positions and momenta `(p, q)` from `(ξ, η)`; real exactly when the
/// coordinates are real.
pub fn pq_from_modes(m: &ModeCoords) -> (Vec<Complex64>, Vec<Complex64>) {
    let (ph, qh) = fourier_from_modes(m);
    (idft(&ph), idft(&qh))
}

/// Reduced lattice state from real `(ξ, η)`.
pub fn state_from_modes(m: &ModeCoords) -> Result<LatticeState> {
    if !m.is_real(1e-12 * (1.0 + m.max_abs())) {
        return Err(Error::NotReal);
    }
    let (p, q) = pq_from_modes(m);
    Ok(LatticeState::from_parts_unchecked(
        p.iter().map(|z| z.re).collect(),
        q.iter().map(|z| z.re).collect(),
        true,
    ))
}

/// Linear Birkhoff variables `(X, Y)` of a reduced state.
pub fn to_linear_birkhoff(state: &LatticeState) -> Result<XYCoords> {
    to_modes(state)?.to_xy()
}

/// Inverse of [`to_linear_birkhoff`].
pub fn from_linear_birkhoff(xy: &XYCoords) -> Result<LatticeState> {
    state_from_modes(&xy.to_modes())
}

/// Mode energies `E_k = (|p̂_k|² + ω_k²|q̂_k|²)/2`, `k = 1..N-1` at index `k − 1`.
pub fn mode_energies(state: &LatticeState) -> Result<Vec<f64>> {
    let (ph, qh) = fourier_pq(state)?;
    let n = state.n();
    let table = mode_table(n);
    Ok((1..n)
        .map(|k| (ph[k].norm_sqr() + table.omega(k).powi(2) * qh[k].norm_sqr()) / 2.0)
        .collect())
}

/// Specific mode energies `𝓔_k = E_k / N`.
pub fn specific_energies(state: &LatticeState) -> Result<Vec<f64>> {
    let n = state.n() as f64;
    Ok(mode_energies(state)?.into_iter().map(|e| e / n).collect())
}

/// Running trapezoidal time average `(1/t)∫₀ᵗ f(s) ds` of a uniformly sampled
/// series. The value at `t = 0` is the first sample.
pub fn time_average(series: &[f64], dt: f64) -> Result<Vec<f64>> {
    if series.is_empty() {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("sample spacing {dt} must be positive")));
    }
    let mut out = Vec::with_capacity(series.len());
    out.push(series[0]);
    let mut integral = 0.0;
    for i in 1..series.len() {
        integral += 0.5 * dt * (series[i - 1] + series[i]);
        out.push(integral / (dt * i as f64));
    }
    Ok(out)
}

/// Cubic Hamiltonian `H₁` in complex variables:
///
/// `H₁ = 1/(12√(2N)) [ Σ_{k₁+k₂+k₃≡0} (−1)^{(k₁+k₂+k₃)/N} √(ω₁ω₂ω₃)(ξξξ + ηηη)
///      + 3 Σ_{k₁+k₂−k₃≡0} (−1)^{(k₁+k₂−k₃)/N} √(ω₁ω₂ω₃)(ξξη + ηηξ) ]`.
pub fn h1_complex(m: &ModeCoords) -> Complex64 {
    let n = m.n;
    let table = mode_table(n);
    let sq: Vec<f64> = (0..n).map(|k| table.omega(k).sqrt()).collect();
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    for k1 in 1..n {
        for k2 in 1..n {
            let w12 = sq[k1] * sq[k2];
            let k3 = (2 * n - k1 - k2) % n;
            if k3 != 0 {
                let sign = if ((k1 + k2 + k3) / n) % 2 == 0 { 1.0 } else { -1.0 };
                let term = m.xi_at(k1) * m.xi_at(k2) * m.xi_at(k3)
                    + m.eta_at(k1) * m.eta_at(k2) * m.eta_at(k3);
                first += sign * w12 * sq[k3] * term;
            }
            let k3 = (k1 + k2) % n;
            if k3 != 0 {
                let sign = if ((k1 + k2 - k3) / n) % 2 == 0 { 1.0 } else { -1.0 };
                let term = m.xi_at(k1) * m.xi_at(k2) * m.eta_at(k3)
                    + m.eta_at(k1) * m.eta_at(k2) * m.xi_at(k3);
                second += sign * w12 * sq[k3] * term;
            }
        }
    }
    (first + 3.0 * second) / (12.0 * (2.0 * n as f64).sqrt())
}

/// Which frequency set a trigonometric interpolant uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencySet {
    /// Frequencies `−k` for `k = 0..N-1`, as in the literal definition of the
    /// interpolants.
    Standard,
    /// Frequencies `−k̃` with `k̃ ∈ (−N/2, N/2]`, so that `|k̃| = [k]_N`.
    Minimal,
}

/// A trigonometric polynomial `f(x) = Σ c_m e^{2πi m x}` on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    terms: Vec<(i64, Complex64)>,
}

impl TrigPolynomial {
    /// The `(frequency, coefficient)` pairs.
    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    /// Value of the `s`-th derivative at `x`.
    pub fn eval_derivative(&self, x: f64, s: u32) -> Complex64 {
        self.terms
            .iter()
            .map(|&(m, c)| {
                let factor = (I * 2.0 * PI * m as f64).powu(s);
                c * factor * Complex64::from_polar(1.0, 2.0 * PI * m as f64 * x)
            })
            .sum()
    }

    /// `∫₀¹ |∂ˢf|² dx`, evaluated from the coefficients.
    pub fn derivative_l2_sq(&self, s: u32) -> f64 {
        csum(
            self.terms
                .iter()
                .map(|&(m, c)| (2.0 * PI * m as f64).powi(2 * s as i32) * c.norm_sqr()),
        )
    }
}

/// Interpolating functions `(β, α)` with `β(j/N) = p_j` and
/// `α(j/N) = q_j − q_{j+1}`, built from the Fourier coefficients of the state.
pub fn interpolants(
    state: &LatticeState,
    set: FrequencySet,
) -> Result<(TrigPolynomial, TrigPolynomial)> {
    let (ph, qh) = fourier_pq(state)?;
    let n = state.n();
    let scale = 1.0 / (n as f64).sqrt();
    let freq = |k: usize| -> i64 {
        let k = k as i64;
        match set {
            FrequencySet::Standard => -k,
            FrequencySet::Minimal => {
                if 2 * k <= n as i64 {
                    -k
                } else {
                    n as i64 - k
                }
            }
        }
    };
    let mut beta = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        let shift = Complex64::new(1.0, 0.0)
            - Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64);
        beta.push((freq(k), ph[k] * scale));
        alpha.push((freq(k), qh[k] * shift * scale));
    }
    Ok((TrigPolynomial { terms: beta }, TrigPolynomial { terms: alpha }))
}
