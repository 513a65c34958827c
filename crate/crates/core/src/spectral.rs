//! Spectral theory of the periodic Toda lattice.
//!
//! The translated Flaschka variables `b_j = −p_j`, `a_j = e^{(q_j − q_{j+1})/2} − 1`
//! define a `2N`-periodic Jacobi matrix `L_{b,a}` whose diagonal is
//! `b_{k mod N}` and whose off-diagonal (including the corner) is
//! `1 + a_{k mod N}`. At `(b,a) = (0,0)` its spectrum is
//! `λ⁰_0 = −2`, `λ⁰_{2j−1} = λ⁰_{2j} = −2cos(jπ/N)`, `λ⁰_{2N−1} = 2`, with the
//! plane-wave eigenvectors `g_m(k) = e^{iπ(N+m)k/N}/√(2N)`, `m ∈ ℤ/2Nℤ`,
//! where `g_j = f_{2j,0}` and `g_{−j} = conj g_j = f_{2j−1,0}`.
//!
//! From the perturbed spectral projectors `P_j` the transformation operators
//! `U_j = (1 − (P_j − P_{j0})²)^{−1/2} P_j` carry the free eigenvectors into
//! the perturbed spectral subspaces, and
//! `z_j = D_j ⟨(L − λ⁰_{2j}) U_j g_j, conj(U_j g_j)⟩`,
//! `w_j = D_j ⟨(L − λ⁰_{2j}) U_j g_{−j}, conj(U_j g_{−j})⟩` with
//! `D_j = (2ω_j/N)^{−1/2}` and `⟨u,v⟩ = Σ u_k conj(v_k)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fourier::{self, mode_table, ModeCoords};
use crate::lattice::LatticeState;
use crate::linalg::symmetric_eigen;
use crate::sum::csum;
use crate::{Error, Result};

type CMatrix = DMatrix<Complex64>;
type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real translated Flaschka coordinates `(b, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaschkaCoords {
    b: Vec<f64>,
    a: Vec<f64>,
    constrained: bool,
}

impl FlaschkaCoords {
    /// Builds coordinates; the `constrained` flag records whether
    /// `Σb = 0` and `Π(1 + a) = 1` hold to `1e-12`.
    pub fn new(b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if b.len() < 2 {
            return Err(Error::InvalidArgument("need N ≥ 2".into()));
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: b.len(),
                found: a.len(),
            });
        }
        if b.iter().chain(&a).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let constrained = constraints_hold(&b, &a);
        Ok(Self { b, a, constrained })
    }

    /// The point `(0, 0)`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Diagonal part `b`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Off-diagonal part `a`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Whether `Σb = 0` and `Π(1 + a) = 1` hold.
    pub fn is_constrained(&self) -> bool {
        self.constrained
    }

    /// Multiplies both `b` and `a` by `factor` (the constraint is generally lost).
    pub fn scaled(&self, factor: f64) -> Self {
        let b: Vec<f64> = self.b.iter().map(|x| x * factor).collect();
        let a: Vec<f64> = self.a.iter().map(|x| x * factor).collect();
        let constrained = constraints_hold(&b, &a);
        Self { b, a, constrained }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        if other.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let b = self.b.iter().zip(&other.b).map(|(x, y)| x + c * y).collect();
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + c * y).collect();
        Self::new(b, a)
    }

    /// Fourier coefficients `(b̂, â)`.
    pub fn fourier(&self) -> FlaschkaFourier {
        FlaschkaFourier {
            b_hat: fourier::dft_real(&self.b),
            a_hat: fourier::dft_real(&self.a),
        }
    }

    /// Weighted norm
    /// `‖(b,a)‖² = (1/2N) Σ_k max(1,[k]^{2s}) e^{2σ[k]} (|b̂_k|² + 4|â_k|²)`.
    pub fn norm(&self, s: f64, sigma: f64) -> f64 {
        let n = self.n();
        let f = self.fourier();
        let total = csum((0..n).map(|k| {
            let br = fourier::bracket(n, k as i64) as f64;
            let w = br.powf(2.0 * s).max(1.0) * (2.0 * sigma * br).exp();
            w * (f.b_hat[k].norm_sqr() + 4.0 * f.a_hat[k].norm_sqr())
        }));
        (total / (2.0 * n as f64)).sqrt()
    }
}

fn constraints_hold(b: &[f64], a: &[f64]) -> bool {
    let sum_b = csum(b.iter().copied());
    let log_prod = csum(a.iter().map(|x| x.ln_1p()));
    sum_b.abs() <= 1e-12 && log_prod.is_finite() && log_prod.abs() <= 1e-12
}

/// Fourier coefficients `(b̂, â)` of Flaschka coordinates, possibly complex.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaschkaFourier {
    /// `b̂_k`, `k = 0..N-1`.
    pub b_hat: Vec<Complex64>,
    /// `â_k`, `k = 0..N-1`.
    pub a_hat: Vec<Complex64>,
}

impl FlaschkaFourier {
    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.b_hat.len()
    }
}

/// The Flaschka map `(p,q) ↦ (b,a) = (−p, e^{(q_j − q_{j+1})/2} − 1)`.
pub fn flaschka(state: &LatticeState) -> FlaschkaCoords {
    let b: Vec<f64> = state.p().iter().map(|x| -x).collect();
    let a: Vec<f64> = state
        .differences()
        .into_iter()
        .map(|d| (0.5 * d).exp_m1())
        .collect();
    let constrained = constraints_hold(&b, &a);
    FlaschkaCoords { b, a, constrained }
}

/// Inverse of [`flaschka`] in the gauge `Σq = 0`.
///
/// Requires every `a_j > −1` and `Π(1 + a_j) = 1` (otherwise no periodic `q`
/// exists).
pub fn inverse_flaschka(f: &FlaschkaCoords) -> Result<LatticeState> {
    let n = f.n();
    if let Some((index, &value)) = f.a.iter().enumerate().find(|(_, &x)| x <= -1.0) {
        return Err(Error::FlaschkaDomain { index, value });
    }
    let d: Vec<f64> = f.a.iter().map(|x| 2.0 * x.ln_1p()).collect();
    let total = csum(d.iter().copied());
    let scale = d.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    if total.abs() > 1e-10 * scale * n as f64 {
        return Err(Error::InvalidArgument(format!(
            "Π(1 + a) = {} differs from 1",
            total.exp()
        )));
    }
    let mut q = vec![0.0; n];
    for j in 0..n - 1 {
        q[j + 1] = q[j] - d[j];
    }
    let mean = csum(q.iter().copied()) / n as f64;
    q.iter_mut().for_each(|x| *x -= mean);
    let p = f.b.iter().map(|x| -x).collect();
    LatticeState::new(p, q)
}

/// The composition `Θ_Ξ = flaschka ∘ T` from real `(ξ, η)` to `(b, a)`.
pub fn theta_xi(m: &ModeCoords) -> Result<FlaschkaCoords> {
    Ok(flaschka(&fourier::state_from_modes(m)?))
}

/// The doubled `2N × 2N` periodic Jacobi matrix `L_{b,a}`.
pub fn build_doubled_jacobi(f: &FlaschkaCoords) -> DMatrix<f64> {
    let n = f.n();
    let m = 2 * n;
    let mut l = DMatrix::zeros(m, m);
    for k in 0..m {
        l[(k, k)] = f.b[k % n];
        let next = (k + 1) % m;
        let off = 1.0 + f.a[k % n];
        l[(k, next)] = off;
        l[(next, k)] = off;
    }
    l
}

/// The doubled Jacobi matrix for complex `(b, a)` (perturbative use only: no
/// spectral ordering is attached to complex data).
pub fn build_doubled_jacobi_complex(b: &[Complex64], a: &[Complex64]) -> Result<CMatrix> {
    let n = b.len();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need N ≥ 2".into()));
    }
    let m = 2 * n;
    let mut l = CMatrix::zeros(m, m);
    for k in 0..m {
        l[(k, k)] = b[k % n];
        let next = (k + 1) % m;
        let off = Complex64::new(1.0, 0.0) + a[k % n];
        l[(k, next)] = off;
        l[(next, k)] = off;
    }
    Ok(l)
}

/// Sorted spectrum of the doubled Jacobi matrix with its gaps.
#[derive(Debug, Clone)]
pub struct SpectrumData {
    n: usize,
    lambdas: Vec<f64>,
    gaps: Vec<f64>,
    eigvecs: Option<DMatrix<f64>>,
    residual: f64,
}

impl SpectrumData {
    fn from_parts(n: usize, lambdas: Vec<f64>, eigvecs: Option<DMatrix<f64>>, residual: f64) -> Self {
        let gaps = (1..n).map(|j| lambdas[2 * j] - lambdas[2 * j - 1]).collect();
        Self {
            n,
            lambdas,
            gaps,
            eigvecs,
            residual,
        }
    }

    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The `2N` eigenvalues in ascending order.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Gaps `γ_j = λ_{2j} − λ_{2j−1}` for `j = 1..N-1`, stored at index `j − 1`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Gap `γ_j` for `j` in `1..N`.
    pub fn gap(&self, j: usize) -> f64 {
        self.gaps[j - 1]
    }

    /// Orthonormal eigenvectors as columns, when computed.
    pub fn eigvecs(&self) -> Option<&DMatrix<f64>> {
        self.eigvecs.as_ref()
    }

    /// Maximum eigenpair residual `‖Lv − λv‖`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Indices of the eigenvalues belonging to cluster `j` (`0..=N`).
    pub fn cluster(&self, j: usize) -> Result<std::ops::RangeInclusive<usize>> {
        cluster_indices(self.n, j)
    }
}

fn cluster_indices(n: usize, j: usize) -> Result<std::ops::RangeInclusive<usize>> {
    match j {
        0 => Ok(0..=0),
        _ if j == n => Ok(2 * n - 1..=2 * n - 1),
        _ if j < n => Ok(2 * j - 1..=2 * j),
        _ => Err(Error::InvalidArgument(format!(
            "cluster index {j} outside 0..={n}"
        ))),
    }
}

/// Eigenvalues, eigenvectors and gaps of `L_{b,a}`.
pub fn eigen_doubled(f: &FlaschkaCoords) -> Result<SpectrumData> {
    let l = build_doubled_jacobi(f);
    let eig = symmetric_eigen(&l)?;
    let residual = eig.residual(&l);
    Ok(SpectrumData::from_parts(
        f.n(),
        eig.values,
        Some(eig.vectors),
        residual,
    ))
}

/// The free eigenvalue `λ̂_m = −2cos(mπ/N)` attached to the plane wave `g_m`.
pub fn free_eigenvalue(n: usize, m: i64) -> f64 {
    -2.0 * (m as f64 * PI / n as f64).cos()
}

/// The free eigenvector `g_m(k) = e^{iπ(N+m)k/N}/√(2N)`, `k = 0..2N-1`.
pub fn free_eigenvector(n: usize, m: i64) -> CVector {
    let size = 2 * n;
    let norm = 1.0 / (size as f64).sqrt();
    let freq = (n as i64 + m).rem_euclid(size as i64);
    CVector::from_iterator(
        size,
        (0..size).map(|k| {
            let phase = PI * ((freq * k as i64) % size as i64) as f64 / n as f64;
            Complex64::from_polar(norm, phase)
        }),
    )
}

/// Closed-form spectrum of `L_{0,0}`; the eigenvector columns are the real
/// orthonormal pairs `√2 Re g_j`, `√2 Im g_j` (and `g_0`, `g_N`).
pub fn unperturbed_spectrum(n: usize) -> Result<SpectrumData> {
    if n < 2 {
        return Err(Error::InvalidArgument("need N ≥ 2".into()));
    }
    let size = 2 * n;
    let mut lambdas = vec![0.0; size];
    let mut vecs = DMatrix::zeros(size, size);
    lambdas[0] = -2.0;
    lambdas[size - 1] = 2.0;
    let g0 = free_eigenvector(n, 0);
    let gn = free_eigenvector(n, n as i64);
    for k in 0..size {
        vecs[(k, 0)] = g0[k].re;
        vecs[(k, size - 1)] = gn[k].re;
    }
    let r2 = std::f64::consts::SQRT_2;
    for j in 1..n {
        let lam = free_eigenvalue(n, j as i64);
        lambdas[2 * j - 1] = lam;
        lambdas[2 * j] = lam;
        let g = free_eigenvector(n, j as i64);
        for k in 0..size {
            vecs[(k, 2 * j - 1)] = r2 * g[k].re;
            vecs[(k, 2 * j)] = r2 * g[k].im;
        }
    }
    Ok(SpectrumData::from_parts(n, lambdas, Some(vecs), 0.0))
}

/// The free projector `P_{j0}` onto `span{g_j, g_{−j}}` (or `g_0`, `g_N`).
pub fn free_projector(n: usize, j: usize) -> Result<DMatrix<f64>> {
    cluster_indices(n, j)?;
    let g = free_eigenvector(n, j as i64);
    let outer = &g * g.adjoint();
    let p = if j == 0 || j == n {
        outer.map(|z| z.re)
    } else {
        outer.map(|z| 2.0 * z.re)
    };
    Ok(p)
}

/// Spectral projector `P_j = Σ v vᵀ` over the eigenvectors of cluster `j`.
pub fn projector(f: &FlaschkaCoords, j: usize) -> Result<DMatrix<f64>> {
    let spec = eigen_doubled(f)?;
    projector_from_spectrum(&spec, j)
}

/// [`projector`] reusing an already computed spectrum.
pub fn projector_from_spectrum(spec: &SpectrumData, j: usize) -> Result<DMatrix<f64>> {
    let range = spec.cluster(j)?;
    let vecs = spec
        .eigvecs()
        .ok_or_else(|| Error::InvalidArgument("spectrum without eigenvectors".into()))?;
    let lam = spec.lambdas();
    let lo = *range.start();
    let hi = *range.end();
    let below = if lo > 0 { lam[lo] - lam[lo - 1] } else { f64::INFINITY };
    let above = if hi + 1 < lam.len() {
        lam[hi + 1] - lam[hi]
    } else {
        f64::INFINITY
    };
    let distance = below.min(above);
    let tol = 10.0 * spec.residual().max(f64::EPSILON);
    if distance <= tol {
        return Err(Error::NotSeparated {
            index: j,
            distance,
            residual: spec.residual(),
        });
    }
    let size = lam.len();
    let mut p = DMatrix::zeros(size, size);
    for k in range {
        let v = vecs.column(k);
        p += v * v.transpose();
    }
    Ok(p)
}

/// Radius `min(⟨j⟩, ⟨N−j⟩)/(2N²)` of the contour around cluster `j`, with
/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn contour_radius(n: usize, j: usize) -> f64 {
    let bracket = |x: f64| (1.0 + x * x).sqrt();
    let nn = n as f64;
    bracket(j as f64).min(bracket(nn - j as f64)) / (2.0 * nn * nn)
}

/// Center `λ⁰_{2j}` of the contour around cluster `j`.
pub fn contour_center(n: usize, j: usize) -> f64 {
    free_eigenvalue(n, j as i64)
}

/// Spectral projector from the resolvent integral
/// `P_j = −(1/2πi) ∮ (L − λ)^{−1} dλ`, discretised by the trapezoidal rule
/// with `quad_points` nodes on the circle of [`contour_radius`] around
/// [`contour_center`].
pub fn projector_contour(f: &FlaschkaCoords, j: usize, quad_points: usize) -> Result<CMatrix> {
    let l = build_doubled_jacobi(f).map(|x| Complex64::new(x, 0.0));
    projector_contour_matrix(&l, f.n(), j, quad_points)
}

/// [`projector_contour`] for an arbitrary (possibly complex) doubled matrix.
pub fn projector_contour_matrix(
    l: &CMatrix,
    n: usize,
    j: usize,
    quad_points: usize,
) -> Result<CMatrix> {
    cluster_indices(n, j)?;
    if quad_points < 16 {
        return Err(Error::InvalidArgument(format!(
            "at least 16 quadrature points required, got {quad_points}"
        )));
    }
    let size = l.nrows();
    let center = contour_center(n, j);
    let radius = contour_radius(n, j);
    let mut acc = CMatrix::zeros(size, size);
    for m in 0..quad_points {
        let theta = 2.0 * PI * m as f64 / quad_points as f64;
        let e = Complex64::from_polar(1.0, theta);
        let lambda = Complex64::new(center, 0.0) + radius * e;
        let mut shifted = l.clone();
        for k in 0..size {
            shifted[(k, k)] -= lambda;
        }
        let inv = shifted.lu().try_inverse().ok_or(Error::Singular)?;
        acc += inv * e;
    }
    Ok(acc * Complex64::new(-radius / quad_points as f64, 0.0))
}

/// Transformation operator `U_j = (1 − (P_j − P_{j0})²)^{−1/2} P_j`.
///
/// The inverse square root is evaluated through the eigendecomposition of the
/// symmetric matrix `(P_j − P_{j0})²`.
pub fn transform_u(f: &FlaschkaCoords, j: usize) -> Result<DMatrix<f64>> {
    let spec = eigen_doubled(f)?;
    transform_u_from_spectrum(&spec, j)
}

/// [`transform_u`] reusing an already computed spectrum.
pub fn transform_u_from_spectrum(spec: &SpectrumData, j: usize) -> Result<DMatrix<f64>> {
    let p = projector_from_spectrum(spec, j)?;
    let p0 = free_projector(spec.n(), j)?;
    let d = &p - &p0;
    let mut d2 = &d * &d;
    d2 = (&d2 + d2.transpose()) * 0.5;
    let eig = symmetric_eigen(&d2)?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let distance = top.sqrt();
    if distance >= 1.0 {
        return Err(Error::ProjectorTooFar { index: j, distance });
    }
    let scales = DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&mu| 1.0 / (1.0 - mu.max(0.0)).sqrt()),
    );
    let v = &eig.vectors;
    let inv_sqrt = v * DMatrix::from_diagonal(&scales) * v.transpose();
    Ok(inv_sqrt * p)
}

/// Nonlinear coordinates `(z, w)`, `j = 1..N-1` at index `j − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZCoords {
    n: usize,
    z: Vec<Complex64>,
    w: Vec<Complex64>,
}

impl ZCoords {
    /// Builds coordinates from `z_j`, `w_j` stored at index `j − 1`.
    pub fn new(z: Vec<Complex64>, w: Vec<Complex64>) -> Result<Self> {
        if z.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: z.len(),
                found: w.len(),
            });
        }
        Ok(Self {
            n: z.len() + 1,
            z,
            w,
        })
    }

    /// Number of sites `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `z_j` at index `j − 1`.
    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    /// `w_j` at index `j − 1`.
    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    /// Maximum modulus over all entries of `self − other`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .chain(self.w.iter().zip(&other.w))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `D_j = (2ω_j/N)^{−1/2}`.
pub fn d_factor(n: usize, j: usize) -> f64 {
    (2.0 * mode_table(n).omega(j) / n as f64).sqrt().recip()
}

/// The map `Z: (b, a) ↦ (z, w)`.
pub fn z_map(f: &FlaschkaCoords) -> Result<ZCoords> {
    let n = f.n();
    let l = build_doubled_jacobi(f);
    let eig = symmetric_eigen(&l)?;
    let residual = eig.residual(&l);
    let spec = SpectrumData::from_parts(n, eig.values, Some(eig.vectors), residual);
    let lc = l.map(|x| Complex64::new(x, 0.0));
    let mut z = Vec::with_capacity(n - 1);
    let mut w = Vec::with_capacity(n - 1);
    for j in 1..n {
        let u = transform_u_from_spectrum(&spec, j)?.map(|x| Complex64::new(x, 0.0));
        let lam0 = free_eigenvalue(n, j as i64);
        let dj = d_factor(n, j);
        let pairing = |m: i64| -> Complex64 {
            let fvec = &u * free_eigenvector(n, m);
            let lf = &lc * &fvec - &fvec * Complex64::new(lam0, 0.0);
            lf.iter().zip(fvec.iter()).map(|(x, y)| x * y).sum::<Complex64>() * dj
        };
        z.push(pairing(j as i64));
        w.push(pairing(-(j as i64)));
    }
    Ok(ZCoords { n, z, w })
}

/// Differential of `Θ_Ξ` at the origin:
/// `B̂_k = −(ω_k/2)^{1/2}(ξ_k + η_{N−k})`,
/// `Â_k = −iϖ_k (2ω_k)^{−1/2}(ξ_k − η_{N−k})` with `ϖ_k = (1 − e^{−2πik/N})/2`,
/// and `B̂_0 = Â_0 = 0`.
pub fn dtheta_xi_zero(m: &ModeCoords) -> FlaschkaFourier {
    let n = m.n();
    let table = mode_table(n);
    let mut b_hat = vec![ZERO; n];
    let mut a_hat = vec![ZERO; n];
    for k in 1..n {
        let w = table.omega(k);
        let varpi = (Complex64::new(1.0, 0.0)
            - Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            / 2.0;
        let xi = m.xi_at(k);
        let eta = m.eta_at(n - k);
        b_hat[k] = -(w / 2.0).sqrt() * (xi + eta);
        a_hat[k] = -I * varpi * (xi - eta) / (2.0 * w).sqrt();
    }
    FlaschkaFourier { b_hat, a_hat }
}

/// Differential of `Z` at the origin:
/// `dz_j = (2ω_j)^{−1/2}(b̂_j − 2e^{ijπ/N} â_j)`,
/// `dw_j = (2ω_j)^{−1/2}(b̂_{N−j} − 2e^{−ijπ/N} â_{N−j})`.
pub fn dz_zero(fh: &FlaschkaFourier) -> ZCoords {
    let n = fh.n();
    let table = mode_table(n);
    let mut z = Vec::with_capacity(n - 1);
    let mut w = Vec::with_capacity(n - 1);
    for j in 1..n {
        let c = (2.0 * table.omega(j)).sqrt().recip();
        let phase = Complex64::from_polar(1.0, j as f64 * PI / n as f64);
        z.push(c * (fh.b_hat[j] - 2.0 * phase * fh.a_hat[j]));
        w.push(c * (fh.b_hat[n - j] - 2.0 * phase.conj() * fh.a_hat[n - j]));
    }
    ZCoords { n, z, w }
}

/// Matrix element `⟨L_p g_j, g_k⟩` of the perturbation `L_p = L_{b,a} − L_{0,0}`
/// between free eigenvectors.
///
/// It vanishes unless `j − k = 2l` is even, in which case it equals
/// `(b̂_l − 2e^{iπl/N} cos(π(k + l)/N) â_l)/√N`.
pub fn perturbation_element(fh: &FlaschkaFourier, j: i64, k: i64) -> Complex64 {
    let n = fh.n() as i64;
    let diff = (j - k).rem_euclid(2 * n);
    if diff % 2 != 0 {
        return ZERO;
    }
    let l = diff / 2;
    let idx = l as usize;
    let phase = Complex64::from_polar(1.0, PI * l as f64 / n as f64);
    let cosine = (PI * (k + l) as f64 / n as f64).cos();
    (fh.b_hat[idx] - 2.0 * phase * cosine * fh.a_hat[idx]) / (n as f64).sqrt()
}

/// Quadratic Taylor term of `Z` at the origin:
/// `z²_j = −D_j Σ_m ⟨L_p g_j, g_m⟩⟨L_p g_j, g_{−m}⟩/(λ̂_m − λ̂_j)`
/// over `m ∈ ℤ/2Nℤ` with `m ≢ ±j`, and the same with `j → −j` for `w²_j`.
pub fn z2_taylor(fh: &FlaschkaFourier) -> ZCoords {
    let n = fh.n();
    let size = 2 * n as i64;
    let second = |m0: i64| -> Complex64 {
        let lam0 = free_eigenvalue(n, m0);
        let mut acc = ZERO;
        for m in 0..size {
            let same = (m - m0).rem_euclid(size) == 0 || (m + m0).rem_euclid(size) == 0;
            if same || (m - m0).rem_euclid(2) != 0 {
                continue;
            }
            let num = perturbation_element(fh, m0, m) * perturbation_element(fh, m0, -m);
            acc += num / (free_eigenvalue(n, m) - lam0);
        }
        acc
    };
    let mut z = Vec::with_capacity(n - 1);
    let mut w = Vec::with_capacity(n - 1);
    for j in 1..n {
        let dj = d_factor(n, j);
        z.push(-dj * second(j as i64));
        w.push(-dj * second(-(j as i64)));
    }
    ZCoords { n, z, w }
}

/// The map `Ψ = −Z ∘ Θ_Ξ` on real `(ξ, η)`.
pub fn psi_map(m: &ModeCoords) -> Result<ModeCoords> {
    let f = theta_xi(m)?;
    let z = z_map(&f)?;
    ModeCoords::new(
        z.z.iter().map(|x| -x).collect(),
        z.w.iter().map(|x| -x).collect(),
    )
}

/// Gaps `γ_j`, `j = 1..N-1`, of the state's Lax matrix.
pub fn gaps_of_state(state: &LatticeState) -> Result<Vec<f64>> {
    Ok(eigen_doubled(&flaschka(state))?.gaps().to_vec())
}
