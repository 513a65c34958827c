//! Identity and inequality suites of the majorant calculus.
//!
//! The identity suite works in exact rational arithmetic, so every check is
//! an equality of coefficients rather than a tolerance test.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use toda_birkhoff::majorant::{
    self, BallWeights, Coefficient, MajorantConstants, Rational, TruncatedMap, VarSpace,
};

use crate::config::ExperimentConfig;
use crate::data::cell_rng;
use crate::error::Result;
use crate::output::Series;

/// Counts of one family of exact identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct IdentityCounts {
    /// Cases checked.
    pub checked: usize,
    /// Cases where the identity failed.
    pub failed: usize,
}

impl IdentityCounts {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

/// One member of the closed-form inversion family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionCase {
    /// Radius `ρ`.
    pub rho: f64,
    /// `|F|_ρ`.
    pub f_norm: f64,
    /// `|G|_{μρ}` from the closed form.
    pub g_norm: f64,
    /// `|G|_{μρ}` summed from the truncated inverse series.
    pub g_norm_truncated: f64,
    /// Whether `|G|_{μρ} ≤ |F|_ρ / 8`.
    pub passed: bool,
}

/// Results of a majorant check run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpSummary {
    /// Truncation degree.
    pub degree: u32,
    /// `(1 + F) ∘ (1 − G) = 1` for the near-identity inverse.
    pub inverse: IdentityCounts,
    /// `(A ∘ B) ∘ C = A ∘ (B ∘ C)`.
    pub associativity: IdentityCounts,
    /// `Φ_t ∘ Φ_s = Φ_{t+s}` for time-one flows of autonomous fields.
    pub flow_group: IdentityCounts,
    /// `|F ∘ G| ≤ |F| ∘ |G|` coefficientwise.
    pub modulus_dominance: IdentityCounts,
    /// Largest normalised ratio of the series inequality (must be ≤ 1).
    pub series_max_ratio: f64,
    /// Where it occurs.
    pub series_argmax: (usize, usize),
    /// Number of `(n, r)` cells enumerated.
    pub series_cells: usize,
    /// Whether the series inequality holds on every cell.
    pub series_passed: bool,
    /// Constant `μ = 1/(e√(32S))`.
    pub mu: f64,
    /// Whether `μ` lies in `(0.0506, 0.0508)`.
    pub mu_in_range: bool,
    /// Closed-form inversion family `F = c v²`.
    pub inversion_family: Vec<InversionCase>,
    /// Conjunction of every check.
    pub passed: bool,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Random sparse map on `vars` plain variables with terms of degree `lo..=hi`.
pub fn random_map(rng: &mut ChaCha8Rng, vars: usize, lo: u32, hi: u32, d: u32) -> TruncatedMap<Rational> {
    let mut f = TruncatedMap::zero(VarSpace::plain(vars), d, vars);
    for comp in 0..vars {
        for _ in 0..rng.gen_range(1..=3) {
            let deg = rng.gen_range(lo..=hi);
            let mut exps = vec![0u32; vars];
            for _ in 0..deg {
                exps[rng.gen_range(0..vars)] += 1;
            }
            let c = q(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            f.add_term(comp, exps, c).expect("component in range");
        }
    }
    f
}

/// Runs the suites.
pub fn run(cfg: &ExperimentConfig) -> Result<(KpSummary, Vec<Series>)> {
    let d = cfg.degree;
    let mut rng = cell_rng(cfg.seed, 0);
    let space = VarSpace::plain(2);
    let id = TruncatedMap::<Rational>::identity(space, d);
    let mut inverse = IdentityCounts::default();
    let mut associativity = IdentityCounts::default();
    let mut flow_group = IdentityCounts::default();
    let mut modulus_dominance = IdentityCounts::default();
    for _ in 0..cfg.maps {
        let f = random_map(&mut rng, 2, 2, 4, d);
        let g = f.invert_near_identity()?;
        let roundtrip = id.add(&f)?.compose(&id.sub(&g)?)?;
        inverse.record(roundtrip == id);

        let a = random_map(&mut rng, 2, 1, 3, d);
        let b = random_map(&mut rng, 2, 1, 3, d);
        let c = random_map(&mut rng, 2, 1, 3, d);
        associativity.record(a.compose(&b)?.compose(&c)? == a.compose(&b.compose(&c)?)?);

        let v = random_map(&mut rng, 2, 2, 3, d);
        let s = q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
        let t = q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
        let lhs = v.flow_near_identity(&t)?.compose(&v.flow_near_identity(&s)?)?;
        flow_group.record(lhs == v.flow_near_identity(&(t + s))?);

        let lhs = a.compose(&b)?.modulus()?;
        let rhs = a.modulus()?.compose(&b.modulus()?)?;
        modulus_dominance.record(lhs.dominated_by(&rhs));
    }

    let report = majorant::series_inequality_check(cfg.series_n, cfg.series_r)?;
    let constants = MajorantConstants::new();
    let mu_in_range = constants.mu > 0.0506 && constants.mu < 0.0508;
    let inversion_family = inversion_family(constants.mu)?;

    let passed = [inverse, associativity, flow_group, modulus_dominance]
        .iter()
        .all(|c| c.failed == 0)
        && report.passed
        && mu_in_range
        && inversion_family.iter().all(|c| c.passed);
    let mut ratios = Series::new("kp_inversion_family");
    for (i, case) in inversion_family.iter().enumerate() {
        ratios.push(case.rho, i, case.g_norm / case.f_norm);
    }
    Ok((
        KpSummary {
            degree: d,
            inverse,
            associativity,
            flow_group,
            modulus_dominance,
            series_max_ratio: report.max_ratio,
            series_argmax: report.argmax,
            series_cells: report.cells,
            series_passed: report.passed,
            mu: constants.mu,
            mu_in_range,
            inversion_family,
            passed,
        },
        vec![ratios],
    ))
}

/// The family `F = c v²` with `|F|_ρ = (ρ/e)·{1, ½, ¼}`.
///
/// The near-identity inverse is `G = Σ_n (−1)^n C_n c^{n+1} v^{n+2}` with the
/// Catalan numbers `C_n`, so its modulus at radius `r` sums to
/// `r[(1 − √(1 − 4cr))/(2cr) − 1]`.
pub fn inversion_family(mu: f64) -> Result<Vec<InversionCase>> {
    let mut out = Vec::new();
    for rho in [0.1, 0.5, 1.0, 3.0] {
        for factor in [1.0, 0.5, 0.25] {
            let f_norm = rho / std::f64::consts::E * factor;
            let c = f_norm / (rho * rho);
            let r = mu * rho;
            let g_norm = r * ((1.0 - (1.0 - 4.0 * c * r).sqrt()) / (2.0 * c * r) - 1.0);
            let mut f = TruncatedMap::<Complex64>::zero(VarSpace::plain(1), 12, 1);
            f.add_term(0, vec![2], Complex64::new(c, 0.0))?;
            let g = f.invert_near_identity()?;
            let truncated = g.majorant_norm_bound(r, &BallWeights::unit(1, 1))?.upper;
            out.push(InversionCase {
                rho,
                f_norm,
                g_norm,
                g_norm_truncated: truncated,
                passed: g_norm <= f_norm / 8.0 && truncated <= g_norm * (1.0 + 1e-12),
            });
        }
    }
    Ok(out)
}
