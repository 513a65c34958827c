//! Truncated power-series maps and the majorant calculus.
//!
//! A [`TruncatedMap`] is a finite list of polynomials in the variables of a
//! [`VarSpace`], truncated at a maximal degree `D`. Variables are either plain
//! (`v_1, …, v_n`) or come in rotation pairs `(ξ_j, η_j)`; in the paired case
//! variable `j − 1` is `ξ_j` and variable `n + j − 1` is `η_j`. A space may also
//! carry parameter variables (such as time) that are appended after the graded
//! variables and do not count toward the degree.
//!
//! Coefficients are generic over [`Coefficient`]: exact rationals
//! ([`Rational`]), exact Gaussian rationals ([`ExactComplex`]) and
//! floating-point complex numbers ([`Complex64`]).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact real coefficients.
pub type Rational = BigRational;

/// Exact complex coefficients with rational real and imaginary parts.
pub type ExactComplex = Complex<BigRational>;

/// Arithmetic needed from a coefficient field.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// The value `num/den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The imaginary unit, when the field contains it.
    fn imaginary_unit() -> Option<Self>;
    /// The number π, when the field contains it.
    fn pi() -> Option<Self>;
    /// The absolute value, when it lies in the field.
    fn modulus(&self) -> Option<Self>;
    /// Complex conjugate (identity on real fields).
    fn conj(&self) -> Self;
    /// Floating-point image used by norm estimates.
    fn to_complex64(&self) -> Complex64;
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl Coefficient for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        ratio(num, den)
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn pi() -> Option<Self> {
        None
    }
    fn modulus(&self) -> Option<Self> {
        Some(self.abs())
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

impl Coefficient for ExactComplex {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(ratio(num, den), BigRational::zero())
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Complex::new(BigRational::zero(), BigRational::one()))
    }
    fn pi() -> Option<Self> {
        None
    }
    fn modulus(&self) -> Option<Self> {
        if self.im.is_zero() {
            Some(Complex::new(self.re.abs(), BigRational::zero()))
        } else if self.re.is_zero() {
            Some(Complex::new(self.im.abs(), BigRational::zero()))
        } else {
            None
        }
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Coefficient for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Complex64::new(0.0, 1.0))
    }
    fn pi() -> Option<Self> {
        Some(Complex64::new(PI, 0.0))
    }
    fn modulus(&self) -> Option<Self> {
        Some(Complex64::new(self.norm(), 0.0))
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

/// Exponent vector of a monomial, ordered by total degree and then
/// lexicographically (graded lexicographic order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// Wraps an exponent vector.
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    /// The constant monomial in `n` variables.
    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The variable `v_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self(e)
    }

    /// Exponents.
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Degree counted over the first `graded` variables.
    pub fn degree(&self, graded: usize) -> u32 {
        self.0[..graded].iter().sum()
    }

    fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Kind of graded variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Plain variables `v_1, …, v_n`.
    Plain,
    /// Rotation pairs `(ξ_j, η_j)`, `j = 1..n`.
    Paired,
}

/// Variables of a power-series map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarSpace {
    kind: VarKind,
    count: usize,
    params: usize,
}

impl VarSpace {
    /// `n` plain variables.
    pub fn plain(n: usize) -> Self {
        Self {
            kind: VarKind::Plain,
            count: n,
            params: 0,
        }
    }

    /// `n` rotation pairs, i.e. `2n` variables.
    pub fn paired(n: usize) -> Self {
        Self {
            kind: VarKind::Paired,
            count: n,
            params: 0,
        }
    }

    /// The same space with `params` ungraded parameter variables appended.
    pub fn with_params(self, params: usize) -> Self {
        Self { params, ..self }
    }

    /// Variable kind.
    pub fn kind(&self) -> VarKind {
        self.kind
    }

    /// Number of plain variables or of rotation pairs.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Number of ungraded parameter variables.
    pub fn params(&self) -> usize {
        self.params
    }

    /// Number of graded variables.
    pub fn graded(&self) -> usize {
        match self.kind {
            VarKind::Plain => self.count,
            VarKind::Paired => 2 * self.count,
        }
    }

    /// Total number of variables, parameters included.
    pub fn total(&self) -> usize {
        self.graded() + self.params
    }

    /// Index of `ξ_j` (`j ≥ 1`) in a paired space.
    pub fn xi(&self, j: usize) -> usize {
        j - 1
    }

    /// Index of `η_j` (`j ≥ 1`) in a paired space.
    pub fn eta(&self, j: usize) -> usize {
        self.count + j - 1
    }

    fn without_params(self) -> Self {
        Self { params: 0, ..self }
    }
}

type Poly<C> = BTreeMap<Monomial, C>;

/// A polynomial map truncated at degree `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMap<C> {
    space: VarSpace,
    max_degree: u32,
    components: Vec<Poly<C>>,
}

fn add_into<C: Coefficient>(p: &mut Poly<C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&m) {
        Some(existing) => {
            let sum = existing.clone() + c;
            if sum.is_zero() {
                p.remove(&m);
            } else {
                *existing = sum;
            }
        }
        None => {
            p.insert(m, c);
        }
    }
}

fn poly_mul<C: Coefficient>(a: &Poly<C>, b: &Poly<C>, graded: usize, max_degree: u32) -> Poly<C> {
    let mut out = Poly::new();
    for (ma, ca) in a {
        let da = ma.degree(graded);
        for (mb, cb) in b {
            if da + mb.degree(graded) > max_degree {
                continue;
            }
            add_into(&mut out, ma.mul(mb), ca.clone() * cb.clone());
        }
    }
    out
}

impl<C: Coefficient> TruncatedMap<C> {
    /// The zero map with `components` outputs.
    pub fn zero(space: VarSpace, max_degree: u32, components: usize) -> Self {
        Self {
            space,
            max_degree,
            components: vec![Poly::new(); components],
        }
    }

    /// The identity on the graded variables.
    pub fn identity(space: VarSpace, max_degree: u32) -> Self {
        let n = space.total();
        let mut map = Self::zero(space, max_degree, space.graded());
        if max_degree >= 1 {
            for (i, comp) in map.components.iter_mut().enumerate() {
                comp.insert(Monomial::var(n, i), C::one());
            }
        }
        map
    }

    /// Variable space.
    pub fn space(&self) -> VarSpace {
        self.space
    }

    /// Truncation degree `D`.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Number of output components.
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Adds `c·v^exps` to output `component`.
    pub fn add_term(&mut self, component: usize, exps: Vec<u32>, c: C) -> Result<()> {
        if component >= self.components.len() {
            return Err(Error::Arity(format!(
                "component {component} out of {}",
                self.components.len()
            )));
        }
        if exps.len() != self.space.total() {
            return Err(Error::DimensionMismatch {
                expected: self.space.total(),
                found: exps.len(),
            });
        }
        let m = Monomial(exps);
        if m.degree(self.space.graded()) > self.max_degree {
            return Err(Error::Malformed(format!(
                "term of degree {} exceeds truncation degree {}",
                m.degree(self.space.graded()),
                self.max_degree
            )));
        }
        add_into(&mut self.components[component], m, c);
        Ok(())
    }

    /// Coefficient of `v^exps` in output `component`.
    pub fn coefficient(&self, component: usize, exps: &[u32]) -> C {
        self.components
            .get(component)
            .and_then(|p| p.get(&Monomial(exps.to_vec())))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Nonzero terms of output `component` in graded lexicographic order.
    pub fn terms(&self, component: usize) -> impl Iterator<Item = (&Monomial, &C)> {
        self.components[component].iter()
    }

    /// Total number of stored terms.
    pub fn n_terms(&self) -> usize {
        self.components.iter().map(BTreeMap::len).sum()
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(BTreeMap::is_empty)
    }

    /// Lowest degree of any stored term (`None` for the zero map).
    pub fn min_degree(&self) -> Option<u32> {
        let g = self.space.graded();
        self.components
            .iter()
            .flat_map(|p| p.keys().map(move |m| m.degree(g)))
            .min()
    }

    /// The part of exact degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let g = self.space.graded();
        self.filter_terms(|m, _| m.degree(g) == d)
    }

    /// Drops all terms above degree `d` and lowers the truncation degree.
    pub fn truncated(&self, d: u32) -> Self {
        let g = self.space.graded();
        let mut out = self.filter_terms(|m, _| m.degree(g) <= d);
        out.max_degree = d.min(self.max_degree);
        out
    }

    fn filter_terms(&self, keep: impl Fn(&Monomial, &C) -> bool) -> Self {
        Self {
            space: self.space,
            max_degree: self.max_degree,
            components: self
                .components
                .iter()
                .map(|p| {
                    p.iter()
                        .filter(|(m, c)| keep(m, c))
                        .map(|(m, c)| (m.clone(), c.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    fn map_terms(&self, mut f: impl FnMut(&Monomial, &C) -> Option<C>) -> Self {
        Self {
            space: self.space,
            max_degree: self.max_degree,
            components: self
                .components
                .iter()
                .map(|p| {
                    p.iter()
                        .filter_map(|(m, c)| {
                            f(m, c).filter(|x| !x.is_zero()).map(|x| (m.clone(), x))
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.space != other.space || self.components.len() != other.components.len() {
            return Err(Error::Arity(format!(
                "cannot combine maps on {:?} with {} outputs and {:?} with {} outputs",
                self.space,
                self.components.len(),
                other.space,
                other.components.len()
            )));
        }
        Ok(())
    }

    /// Sum of two maps on the same space; the truncation degree is the smaller one.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let d = self.max_degree.min(other.max_degree);
        let mut out = self.truncated(d);
        let g = self.space.graded();
        for (dst, src) in out.components.iter_mut().zip(&other.components) {
            for (m, c) in src {
                if m.degree(g) <= d {
                    add_into(dst, m.clone(), c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Difference of two maps on the same space.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        self.map_terms(|_, x| Some(x.clone() * c.clone()))
    }

    /// Coefficientwise absolute value.
    pub fn modulus(&self) -> Result<Self> {
        let mut failed = false;
        let out = self.map_terms(|_, c| {
            let m = c.modulus();
            failed |= m.is_none();
            m
        });
        if failed {
            return Err(Error::NotRepresentable(
                "modulus of a coefficient is not in the field".into(),
            ));
        }
        Ok(out)
    }

    /// Whether every coefficient of `self` is bounded by the corresponding one
    /// of `other` (both compared through their real parts; intended for
    /// nonnegative maps such as moduli).
    pub fn dominated_by(&self, other: &Self) -> bool
    where
        C: PartialOrd,
    {
        self.components.iter().enumerate().all(|(i, p)| {
            p.iter().all(|(m, c)| {
                let bound = other.components[i].get(m).cloned().unwrap_or_else(C::zero);
                *c <= bound
            })
        })
    }

    /// Composition `self ∘ g`, exact through the smaller truncation degree.
    ///
    /// `g` must have one output per variable of `self` (parameters included)
    /// and no constant term in its graded part.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.components.len() != self.space.total() {
            return Err(Error::Arity(format!(
                "outer map has {} variables, inner map has {} outputs",
                self.space.total(),
                g.components.len()
            )));
        }
        let graded = g.space.graded();
        let inner_graded = self.space.graded();
        for (i, comp) in g.components.iter().enumerate().take(inner_graded) {
            if comp.keys().any(|m| m.degree(graded) == 0) {
                return Err(Error::Malformed(format!(
                    "inner component {i} has a term of degree 0"
                )));
            }
        }
        let d = self.max_degree.min(g.max_degree);
        let n_in = g.space.total();
        let mut cache: HashMap<Monomial, Poly<C>> = HashMap::new();
        let mut one = Poly::new();
        one.insert(Monomial::one(n_in), C::one());
        cache.insert(Monomial::one(self.space.total()), one);
        let mut components = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            let mut out = Poly::new();
            for (m, c) in comp {
                if m.degree(inner_graded) > d {
                    continue;
                }
                let prod = power_product(m, &g.components, graded, d, &mut cache);
                for (pm, pc) in prod {
                    add_into(&mut out, pm.clone(), c.clone() * pc.clone());
                }
            }
            components.push(out);
        }
        Ok(Self {
            space: g.space,
            max_degree: d,
            components,
        })
    }

    fn check_quadratic(&self, what: &str) -> Result<()> {
        if self.components.len() != self.space.graded() {
            return Err(Error::Arity(format!(
                "{what} needs a map from the space to itself, got {} outputs for {} variables",
                self.components.len(),
                self.space.graded()
            )));
        }
        if let Some(d) = self.min_degree() {
            if d < 2 {
                return Err(Error::Malformed(format!(
                    "{what} needs a map of order at least 2, found a term of degree {d}"
                )));
            }
        }
        Ok(())
    }

    /// The map `G` with `(1 + F)^{−1} = 1 − G`, for `F = self = O(v²)`.
    ///
    /// The homogeneous pieces are generated degree by degree:
    /// `Gⁿ = Σ_r Σ_{k₁+⋯+k_r = n} F̃^r(u^{k₁}, …, u^{k_r})` with `u¹ = v`,
    /// `u^k = −G^k`, where `F̃^r` is the symmetric multilinear form of the
    /// degree-`r` part of `F`. This sum is the degree-`n` part of
    /// `F(v − G_{<n}(v))`, which is how it is evaluated.
    pub fn invert_near_identity(&self) -> Result<Self> {
        if self.space.params() != 0 {
            return Err(Error::Malformed("inversion needs a map without parameters".into()));
        }
        self.check_quadratic("inversion")?;
        let id = Self::identity(self.space, self.max_degree);
        let mut g = Self::zero(self.space, self.max_degree, self.components.len());
        for n in 2..=self.max_degree {
            let arg = id.sub(&g)?.truncated(n);
            let mut layer = self.truncated(n).compose(&arg)?.homogeneous_part(n);
            layer.max_degree = self.max_degree;
            g = g.add(&layer)?;
        }
        g.max_degree = self.max_degree;
        Ok(g)
    }

    /// Time-`t` flow of `v̇ = V(v)` for `V = self = O(v²)`.
    ///
    /// The field may depend polynomially on time through one parameter
    /// variable. The Picard recursion `u¹ = v`,
    /// `uⁿ(t) = Σ_r Σ_{k₁+⋯+k_r = n} ∫₀ᵗ Ṽ^r(u^{k₁}(s), …, u^{k_r}(s)) ds`
    /// is evaluated as the degree-`n` part of `∫₀ᵗ V(u_{<n}(s), s) ds`.
    pub fn flow_near_identity(&self, t: &C) -> Result<Self> {
        if self.space.params() > 1 {
            return Err(Error::Malformed("flow supports at most one time parameter".into()));
        }
        self.check_quadratic("flow")?;
        let graded = self.space.graded();
        let tspace = self.space.without_params().with_params(1);
        let d = self.max_degree;
        let total = tspace.total();
        // u(v, s) on the space with an explicit time variable.
        let mut u = Self::identity(tspace, d);
        // Inner argument for V: graded components of u, plus s itself when V is
        // time dependent.
        for n in 2..=d {
            let mut arg = u.truncated(n - 1);
            arg.max_degree = n;
            if self.space.params() == 1 {
                let mut s = Poly::new();
                s.insert(Monomial::var(total, graded), C::one());
                arg.components.push(s);
            }
            let field = self.truncated(n).compose(&arg)?.homogeneous_part(n);
            let mut integrated = field.integrate_in_param(graded)?;
            integrated.max_degree = d;
            u = u.add(&integrated)?;
        }
        u.max_degree = d;
        u.evaluate_param(graded, t)
    }

    /// Antiderivative in parameter variable `idx` vanishing at 0.
    fn integrate_in_param(&self, idx: usize) -> Result<Self> {
        let mut out = Self::zero(self.space, self.max_degree, self.components.len());
        for (dst, src) in out.components.iter_mut().zip(&self.components) {
            for (m, c) in src {
                let mut e = m.0.clone();
                e[idx] += 1;
                let factor = C::from_ratio(1, i64::from(e[idx]));
                add_into(dst, Monomial(e), c.clone() * factor);
            }
        }
        Ok(out)
    }

    /// Substitutes the value `t` for parameter variable `idx` and removes it.
    fn evaluate_param(&self, idx: usize, t: &C) -> Result<Self> {
        let space = self.space.without_params();
        let mut out = Self::zero(space, self.max_degree, self.components.len());
        for (dst, src) in out.components.iter_mut().zip(&self.components) {
            for (m, c) in src {
                let mut e = m.0.clone();
                let k = e.remove(idx);
                let mut factor = C::one();
                for _ in 0..k {
                    factor = factor * t.clone();
                }
                add_into(dst, Monomial(e), c.clone() * factor);
            }
        }
        Ok(out)
    }

    /// Evaluates every component at a point of the graded variables
    /// (parameters, if any, are set to zero).
    pub fn eval(&self, point: &[Complex64]) -> Result<Vec<Complex64>> {
        let g = self.space.graded();
        if point.len() != g {
            return Err(Error::DimensionMismatch {
                expected: g,
                found: point.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .map(|p| {
                p.iter()
                    .filter(|(m, _)| m.0[g..].iter().all(|&e| e == 0))
                    .map(|(m, c)| {
                        let mono: Complex64 = m.0[..g]
                            .iter()
                            .zip(point)
                            .map(|(&e, x)| x.powu(e))
                            .product();
                        c.to_complex64() * mono
                    })
                    .sum()
            })
            .collect())
    }

    fn check_paired(&self, j: usize) -> Result<()> {
        if self.space.kind() != VarKind::Paired {
            return Err(Error::Malformed("averaging needs rotation pairs".into()));
        }
        if j == 0 || j > self.space.count() {
            return Err(Error::InvalidArgument(format!(
                "pair index {j} outside 1..={}",
                self.space.count()
            )));
        }
        Ok(())
    }

    fn rotation_weight(&self, m: &Monomial, j: usize) -> i64 {
        i64::from(m.0[self.space.xi(j)]) - i64::from(m.0[self.space.eta(j)])
    }

    /// Rotation average `M_j`: keeps the terms with `K_j = L_j`.
    pub fn average_mj(&self, j: usize) -> Result<Self> {
        self.check_paired(j)?;
        Ok(self.filter_terms(|m, _| self.rotation_weight(m, j) == 0))
    }

    /// Full torus average `M`: keeps the terms with `K = L`.
    pub fn average_m(&self) -> Result<Self> {
        if self.space.kind() != VarKind::Paired {
            return Err(Error::Malformed("averaging needs rotation pairs".into()));
        }
        let n = self.space.count();
        Ok(self.filter_terms(|m, _| (1..=n).all(|j| self.rotation_weight(m, j) == 0)))
    }

    /// `L_j g = (1/2π)∫₀^{2π} t g(φ_j^t) dt`: multiplies a term of rotation
    /// weight `m = K_j − L_j` by `1/(im)` if `m ≠ 0` and by `π` if `m = 0`.
    pub fn average_lj(&self, j: usize) -> Result<Self> {
        self.check_paired(j)?;
        let mut missing = None;
        let out = self.map_terms(|mono, c| {
            let m = self.rotation_weight(mono, j);
            let factor = if m == 0 {
                C::pi()
            } else {
                // 1/(im) = −i/m
                C::imaginary_unit().map(|i| -(i * C::from_ratio(1, m)))
            };
            match factor {
                Some(f) => Some(c.clone() * f),
                None => {
                    missing = Some(if m == 0 { "π" } else { "i" });
                    None
                }
            }
        });
        match missing {
            Some(what) => Err(Error::NotRepresentable(format!(
                "L_{j} needs {what} in the coefficient field"
            ))),
            None => Ok(out),
        }
    }

    /// Derivative along the rotation flow `φ_j`: multiplies a term of rotation
    /// weight `m` by `im`.
    pub fn theta_derivative(&self, j: usize) -> Result<Self> {
        self.check_paired(j)?;
        let i = C::imaginary_unit()
            .ok_or_else(|| Error::NotRepresentable("rotation derivative needs i".into()))?;
        Ok(self.map_terms(|mono, c| {
            let m = self.rotation_weight(mono, j);
            Some(c.clone() * i.clone() * C::from_ratio(m, 1))
        }))
    }

    /// Applies the torus rotation `ξ_j ↦ u_j ξ_j`, `η_j ↦ conj(u_j) η_j` for
    /// unit phases `u_j`, i.e. multiplies each term by `Π u_j^{K_j − L_j}`.
    pub fn rotate(&self, phases: &[C]) -> Result<Self> {
        if self.space.kind() != VarKind::Paired {
            return Err(Error::Malformed("rotation needs rotation pairs".into()));
        }
        if phases.len() != self.space.count() {
            return Err(Error::DimensionMismatch {
                expected: self.space.count(),
                found: phases.len(),
            });
        }
        Ok(self.map_terms(|mono, c| {
            let mut f = c.clone();
            for (idx, u) in phases.iter().enumerate() {
                let m = self.rotation_weight(mono, idx + 1);
                let base = if m >= 0 { u.clone() } else { u.conj() };
                for _ in 0..m.unsigned_abs() {
                    f = f * base.clone();
                }
            }
            Some(f)
        }))
    }

    /// Certified upper and heuristic lower bounds on `|F̲|_ρ`, the supremum of
    /// the modulus map over the weighted ball `{Σ w_i²|v_i|² ≤ ρ²}`.
    pub fn majorant_norm_bound(&self, rho: f64, weights: &BallWeights) -> Result<NormBounds> {
        let g = self.space.graded();
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::InvalidArgument(format!("radius {rho} must be positive")));
        }
        if weights.input.len() != g || weights.output.len() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: g,
                found: weights.input.len(),
            });
        }
        // Upper: |v_k| ≤ ρ/w_k on the ball, applied degree by degree.
        let mut upper = 0.0;
        for r in 0..=self.max_degree {
            let mut sq = 0.0;
            for (i, p) in self.components.iter().enumerate() {
                let a: f64 = p
                    .iter()
                    .filter(|(m, _)| m.degree(g) == r)
                    .map(|(m, c)| {
                        let scale: f64 = m.0[..g]
                            .iter()
                            .zip(&weights.input)
                            .map(|(&e, w)| w.powi(-(e as i32)))
                            .product();
                        c.to_complex64().norm() * scale
                    })
                    .sum();
                sq += (weights.output[i] * a).powi(2);
            }
            upper += rho.powi(r as i32) * sq.sqrt();
        }
        // Lower: the modulus evaluated on each coordinate axis at the boundary.
        let mut lower = 0.0_f64;
        for k in 0..g {
            let x = rho / weights.input[k];
            let mut sq = 0.0;
            for (i, p) in self.components.iter().enumerate() {
                let val: f64 = p
                    .iter()
                    .filter(|(m, _)| {
                        m.0[..g]
                            .iter()
                            .enumerate()
                            .all(|(idx, &e)| idx == k || e == 0)
                    })
                    .map(|(m, c)| c.to_complex64().norm() * x.powi(m.0[k] as i32))
                    .sum();
                sq += (weights.output[i] * val).powi(2);
            }
            lower = lower.max(sq.sqrt());
        }
        Ok(NormBounds { upper, lower })
    }
}

fn power_product<'a, C: Coefficient>(
    m: &Monomial,
    g: &[Poly<C>],
    graded: usize,
    d: u32,
    cache: &'a mut HashMap<Monomial, Poly<C>>,
) -> &'a Poly<C> {
    if !cache.contains_key(m) {
        let i = m.0.iter().position(|&e| e > 0).expect("nonconstant monomial");
        let mut reduced = m.0.clone();
        reduced[i] -= 1;
        let reduced = Monomial(reduced);
        let base = power_product(&reduced, g, graded, d, cache).clone();
        let value = poly_mul(&base, &g[i], graded, d);
        cache.insert(m.clone(), value);
    }
    &cache[m]
}

/// Weights of the input ball and of the output norm.
#[derive(Debug, Clone, PartialEq)]
pub struct BallWeights {
    /// One weight per graded input variable.
    pub input: Vec<f64>,
    /// One weight per output component.
    pub output: Vec<f64>,
}

impl BallWeights {
    /// Unit weights.
    pub fn unit(inputs: usize, outputs: usize) -> Self {
        Self {
            input: vec![1.0; inputs],
            output: vec![1.0; outputs],
        }
    }
}

/// Two-sided estimate of a majorant norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    /// Certified upper bound.
    pub upper: f64,
    /// Value attained at a point of the ball, hence a lower bound.
    pub lower: f64,
}

/// Solution `f = Σ_j M₁⋯M_{j−1} L_j h_j` of `∂f/∂θ_j = h_j`, `j = 1..n`.
///
/// The data must satisfy `∂h_j/∂θ_l = ∂h_l/∂θ_j` and `M h_j = 0`; both are
/// checked coefficientwise.
pub fn moser_f<C: Coefficient>(h: &[TruncatedMap<C>]) -> Result<TruncatedMap<C>> {
    let first = h
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty right-hand side".into()))?;
    let space = first.space();
    if space.kind() != VarKind::Paired || space.count() != h.len() {
        return Err(Error::Arity(format!(
            "need one right-hand side per rotation pair, got {} for {:?}",
            h.len(),
            space
        )));
    }
    for (j, hj) in h.iter().enumerate() {
        if hj.space() != space || hj.n_components() != 1 {
            return Err(Error::Arity(format!("right-hand side {} is not a scalar on {:?}", j + 1, space)));
        }
        if !hj.average_m()?.is_zero() {
            return Err(Error::Incompatible(format!(
                "right-hand side {} has a nonzero torus average",
                j + 1
            )));
        }
    }
    for j in 1..=h.len() {
        for l in (j + 1)..=h.len() {
            let lhs = h[j - 1].theta_derivative(l)?;
            let rhs = h[l - 1].theta_derivative(j)?;
            if !lhs.sub(&rhs)?.is_zero() {
                return Err(Error::Incompatible(format!(
                    "∂h_{j}/∂θ_{l} differs from ∂h_{l}/∂θ_{j}"
                )));
            }
        }
    }
    let d = h.iter().map(TruncatedMap::max_degree).min().unwrap_or(0);
    let mut f = TruncatedMap::zero(space, d, 1);
    for (idx, hj) in h.iter().enumerate() {
        let j = idx + 1;
        let mut term = hj.average_lj(j)?;
        for l in 1..j {
            term = term.average_mj(l)?;
        }
        f = f.add(&term)?;
    }
    Ok(f)
}

/// The constants `S = Σ 1/n² = π²/6` and `μ = 1/(e (32 S)^{1/2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantConstants {
    /// `S = π²/6`.
    pub s: f64,
    /// `μ = 1/(e √(32 S))`.
    pub mu: f64,
}

impl MajorantConstants {
    /// Evaluates the constants.
    pub fn new() -> Self {
        let s = PI * PI / 6.0;
        let mu = 1.0 / (std::f64::consts::E * (32.0 * s).sqrt());
        Self { s, mu }
    }
}

impl Default for MajorantConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Outcome of [`series_inequality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    /// Largest value of `n² Σ 1/(k₁²⋯k_r²) / (4S)^{r−1}` found.
    pub max_ratio: f64,
    /// The `(n, r)` where the maximum occurs.
    pub argmax: (usize, usize),
    /// Number of `(n, r)` cells checked.
    pub cells: usize,
    /// Whether every ratio is at most 1.
    pub passed: bool,
}

/// Exhaustively checks `n² Σ_{k₁+⋯+k_r = n} 1/(k₁²⋯k_r²) ≤ (4S)^{r−1}` for
/// `1 ≤ r ≤ r_max`, `r ≤ n ≤ n_max`, enumerating every composition of `n`.
pub fn series_inequality_check(n_max: usize, r_max: usize) -> Result<SeriesReport> {
    if n_max > 40 || r_max > 6 || n_max == 0 || r_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "series check limited to 1 ≤ n ≤ 40, 1 ≤ r ≤ 6; got n_max={n_max}, r_max={r_max}"
        )));
    }
    let s = MajorantConstants::new().s;
    let mut report = SeriesReport {
        max_ratio: 0.0,
        argmax: (0, 0),
        cells: 0,
        passed: true,
    };
    for r in 1..=r_max {
        for n in r..=n_max {
            let sum = composition_sum(n, r);
            let ratio = (n * n) as f64 * sum / (4.0 * s).powi(r as i32 - 1);
            report.cells += 1;
            if ratio > report.max_ratio {
                report.max_ratio = ratio;
                report.argmax = (n, r);
            }
            if ratio > 1.0 {
                report.passed = false;
            }
        }
    }
    Ok(report)
}

/// `Σ_{k₁+⋯+k_r = n, k_i ≥ 1} 1/(k₁²⋯k_r²)` by explicit enumeration.
pub fn composition_sum(n: usize, r: usize) -> f64 {
    fn go(remaining: usize, parts: usize, acc: f64, total: &mut f64) {
        if parts == 1 {
            let k = remaining as f64;
            *total += acc / (k * k);
            return;
        }
        for k in 1..=remaining - (parts - 1) {
            let kf = k as f64;
            go(remaining - k, parts - 1, acc / (kf * kf), total);
        }
    }
    if r == 0 || n < r {
        return 0.0;
    }
    let mut total = 0.0;
    go(n, r, 1.0, &mut total);
    total
}
