mod common;

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toda_birkhoff::majorant::{
    self, BallWeights, Coefficient, ExactComplex, MajorantConstants, Rational, TruncatedMap, VarSpace,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn qc(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
    Complex::new(q(re.0, re.1), q(im.0, im.1))
}

/// Random sparse map on `vars` plain variables, terms of degree `lo..=hi`.
fn random_map(rng: &mut ChaCha8Rng, vars: usize, outputs: usize, lo: u32, hi: u32, d: u32) -> TruncatedMap<Rational> {
    let mut f = TruncatedMap::zero(VarSpace::plain(vars), d, outputs);
    for comp in 0..outputs {
        for _ in 0..rng.gen_range(1..=3) {
            let deg = rng.gen_range(lo..=hi);
            let mut exps = vec![0u32; vars];
            for _ in 0..deg {
                exps[rng.gen_range(0..vars)] += 1;
            }
            let num = rng.gen_range(-3..=3);
            let den = rng.gen_range(1..=3);
            f.add_term(comp, exps, q(num, den)).unwrap();
        }
    }
    f
}

/// Random scalar on `pairs` rotation pairs with Gaussian-rational coefficients.
fn random_paired_scalar(rng: &mut ChaCha8Rng, pairs: usize, d: u32) -> TruncatedMap<ExactComplex> {
    let space = VarSpace::paired(pairs);
    let mut f = TruncatedMap::zero(space, d, 1);
    for _ in 0..6 {
        let deg = rng.gen_range(1..=d);
        let mut exps = vec![0u32; 2 * pairs];
        for _ in 0..deg {
            exps[rng.gen_range(0..2 * pairs)] += 1;
        }
        let c = qc((rng.gen_range(-4..=4), rng.gen_range(1..=3)), (rng.gen_range(-4..=4), rng.gen_range(1..=3)));
        f.add_term(0, exps, c).unwrap();
    }
    f
}

fn single(terms: &[(u32, i64)], d: u32) -> TruncatedMap<Rational> {
    let mut f = TruncatedMap::zero(VarSpace::plain(1), d, 1);
    for &(e, c) in terms {
        f.add_term(0, vec![e], q(c, 1)).unwrap();
    }
    f
}

#[test]
fn modulus_examples() {
    let f = single(&[(2, -2), (3, 5)], 6);
    let m = f.modulus().unwrap();
    assert_eq!(m.coefficient(0, &[2]), q(2, 1));
    assert_eq!(m.modulus().unwrap(), m);
    // Gaussian rationals with two nonzero parts have no rational modulus.
    let mut g = TruncatedMap::<ExactComplex>::zero(VarSpace::paired(1), 3, 1);
    g.add_term(0, vec![1, 1], qc((1, 1), (1, 1))).unwrap();
    assert!(g.modulus().is_err());
}

#[test]
fn composition_examples() {
    let f = single(&[(2, 1)], 6);
    let id = TruncatedMap::identity(VarSpace::plain(1), 6);
    assert_eq!(f.compose(&id).unwrap(), f);
    let g = single(&[(1, 1), (3, 1)], 6);
    assert_eq!(f.compose(&g).unwrap(), single(&[(2, 1), (4, 2), (6, 1)], 6));
    let wrong = TruncatedMap::<Rational>::identity(VarSpace::plain(2), 6);
    assert!(f.compose(&wrong).is_err());
}

#[test]
fn inversion_examples() {
    let zero = TruncatedMap::<Rational>::zero(VarSpace::plain(2), 6, 2);
    assert!(zero.invert_near_identity().unwrap().is_zero());
    let g = single(&[(2, 1)], 8).invert_near_identity().unwrap();
    // Signed Catalan numbers: v = w + w² gives w = v − v² + 2v³ − 5v⁴ + ⋯.
    let catalan = [1, 2, 5, 14, 42, 132, 429];
    for (i, &c) in catalan.iter().enumerate() {
        let e = i as u32 + 2;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        assert_eq!(g.coefficient(0, &[e]), q(sign * c, 1));
    }
    let linear = single(&[(1, 1), (2, 1)], 4);
    assert!(linear.invert_near_identity().is_err());
}

#[test]
fn flow_examples() {
    let zero = TruncatedMap::<Rational>::zero(VarSpace::plain(1), 5, 1);
    let id = TruncatedMap::identity(VarSpace::plain(1), 5);
    assert_eq!(zero.flow_near_identity(&q(3, 2)).unwrap(), id);
    let t = q(2, 5);
    let u = single(&[(2, 1)], 8).flow_near_identity(&t).unwrap();
    let mut power = Rational::one();
    for e in 1..=8u32 {
        assert_eq!(u.coefficient(0, &[e]), power);
        power *= t.clone();
    }
}

#[test]
fn time_dependent_flow() {
    // u̇ = s·u² has the solution u = v/(1 − t²v/2).
    let space = VarSpace::plain(1).with_params(1);
    let mut field = TruncatedMap::<Rational>::zero(space, 7, 1);
    field.add_term(0, vec![2, 1], q(1, 1)).unwrap();
    let t = q(3, 4);
    let u = field.flow_near_identity(&t).unwrap();
    let c = t.clone() * t.clone() / q(2, 1);
    let mut power = Rational::one();
    for e in 1..=7u32 {
        assert_eq!(u.coefficient(0, &[e]), power);
        power *= c.clone();
    }
}

#[test]
fn exact_identities_on_random_maps() {
    let mut rng = common::rng(60);
    let d = 8;
    let space = VarSpace::plain(2);
    let id = TruncatedMap::<Rational>::identity(space, d);
    for _ in 0..100 {
        let f = random_map(&mut rng, 2, 2, 2, 4, d);
        // (1 + F) ∘ (1 − G) = 1.
        let g = f.invert_near_identity().unwrap();
        let outer = id.add(&f).unwrap();
        let inner = id.sub(&g).unwrap();
        assert_eq!(outer.compose(&inner).unwrap(), id);
        // Associativity.
        let a = random_map(&mut rng, 2, 2, 1, 3, d);
        let b = random_map(&mut rng, 2, 2, 1, 3, d);
        let c = random_map(&mut rng, 2, 2, 1, 3, d);
        assert_eq!(
            a.compose(&b).unwrap().compose(&c).unwrap(),
            a.compose(&b.compose(&c).unwrap()).unwrap()
        );
        // Group property of the flow.
        let v = random_map(&mut rng, 2, 2, 2, 3, d);
        let s = q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
        let t = q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
        let lhs = v
            .flow_near_identity(&t)
            .unwrap()
            .compose(&v.flow_near_identity(&s).unwrap())
            .unwrap();
        let rhs = v.flow_near_identity(&(t + s)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn composition_is_dominated_by_moduli() {
    let mut rng = common::rng(61);
    for _ in 0..50 {
        let f = random_map(&mut rng, 2, 2, 1, 4, 6);
        let g = random_map(&mut rng, 2, 2, 1, 3, 6);
        let lhs = f.compose(&g).unwrap().modulus().unwrap();
        let rhs = f.modulus().unwrap().compose(&g.modulus().unwrap()).unwrap();
        assert!(lhs.dominated_by(&rhs));
        // Monotonicity: |F| ≤ |F| + |K| implies |F|∘|G| ≤ (|F| + |K|)∘|G|.
        let k = random_map(&mut rng, 2, 2, 1, 4, 6).modulus().unwrap();
        let bigger = f.modulus().unwrap().add(&k).unwrap();
        let h = g.modulus().unwrap();
        assert!(f.modulus().unwrap().compose(&h).unwrap().dominated_by(&bigger.compose(&h).unwrap()));
    }
}

#[test]
fn averaging_examples() {
    let space = VarSpace::paired(1);
    let mono = |exps: Vec<u32>| {
        let mut f = TruncatedMap::<Complex64>::zero(space, 4, 1);
        f.add_term(0, exps, Complex64::new(1.0, 0.0)).unwrap();
        f
    };
    let xe = mono(vec![1, 1]);
    assert_eq!(xe.average_mj(1).unwrap(), xe);
    assert!(mono(vec![1, 0]).average_mj(1).unwrap().is_zero());
    let l = mono(vec![2, 0]).average_lj(1).unwrap();
    let expect = Complex64::new(0.0, -0.5);
    assert!((l.coefficient(0, &[2, 0]) - expect).norm() < 1e-15);
    let l = xe.average_lj(1).unwrap();
    assert!((l.coefficient(0, &[1, 1]) - Complex64::new(std::f64::consts::PI, 0.0)).norm() < 1e-15);
    // Exact fields cannot represent π.
    let mut exact = TruncatedMap::<ExactComplex>::zero(space, 4, 1);
    exact.add_term(0, vec![1, 1], qc((1, 1), (0, 1))).unwrap();
    assert!(exact.average_lj(1).is_err());
    assert!(xe.average_mj(2).is_err());
}

#[test]
fn averaging_operators_are_commuting_projections() {
    let mut rng = common::rng(62);
    for _ in 0..30 {
        let f = random_paired_scalar(&mut rng, 3, 5);
        let m1 = f.average_mj(1).unwrap();
        assert_eq!(m1.average_mj(1).unwrap(), m1);
        assert_eq!(m1.average_mj(2).unwrap(), f.average_mj(2).unwrap().average_mj(1).unwrap());
        let m = f.average_m().unwrap();
        assert_eq!(m.average_m().unwrap(), m);
        let all = f.average_mj(1).unwrap().average_mj(2).unwrap().average_mj(3).unwrap();
        assert_eq!(all, m);
        // Equivariance under torus rotations with exact unit phases.
        let phases = vec![qc((3, 5), (4, 5)), qc((5, 13), (-12, 13)), qc((-8, 17), (15, 17))];
        let before = f.rotate(&phases).unwrap().average_m().unwrap();
        let after = f.average_m().unwrap().rotate(&phases).unwrap();
        assert_eq!(before, after);
    }
}

#[test]
fn lj_inverts_the_rotation_derivative() {
    let mut rng = common::rng(63);
    for _ in 0..30 {
        let g: TruncatedMap<Complex64> = {
            let exact = random_paired_scalar(&mut rng, 2, 5);
            let mut f = TruncatedMap::zero(exact.space(), 5, 1);
            for (m, c) in exact.terms(0) {
                f.add_term(0, m.exps().to_vec(), c.to_complex64()).unwrap();
            }
            f
        };
        for j in 1..=2 {
            let lhs = g.average_lj(j).unwrap().theta_derivative(j).unwrap();
            let rhs = g.sub(&g.average_mj(j).unwrap()).unwrap();
            let diff = lhs.sub(&rhs).unwrap();
            assert!(diff.terms(0).all(|(_, c)| c.norm() < 1e-13));
        }
    }
}

#[test]
fn moser_formula_solves_the_cohomological_system() {
    let mut rng = common::rng(64);
    let space = VarSpace::paired(2);
    let zero = vec![TruncatedMap::<Complex64>::zero(space, 4, 1); 2];
    assert!(majorant::moser_f(&zero).unwrap().is_zero());
    for _ in 0..20 {
        let exact = random_paired_scalar(&mut rng, 2, 5);
        let mut g = TruncatedMap::<Complex64>::zero(space, 5, 1);
        for (m, c) in exact.terms(0) {
            g.add_term(0, m.exps().to_vec(), c.to_complex64()).unwrap();
        }
        let h: Vec<_> = (1..=2).map(|j| g.theta_derivative(j).unwrap()).collect();
        let f = majorant::moser_f(&h).unwrap();
        for (j, hj) in h.iter().enumerate() {
            let d = f.theta_derivative(j + 1).unwrap().sub(hj).unwrap();
            assert!(d.terms(0).all(|(_, c)| c.norm() < 1e-12));
        }
        // f and g differ by a rotation-invariant function.
        let diff = f.sub(&g).unwrap();
        let inv = diff.sub(&diff.average_m().unwrap()).unwrap();
        assert!(inv.terms(0).all(|(_, c)| c.norm() < 1e-12));
    }
}

#[test]
fn moser_hand_case() {
    // f = ξ₁²η₂ has h₁ = 2i ξ₁²η₂ and h₂ = −i ξ₁²η₂.
    let space = VarSpace::paired(2);
    let mut f = TruncatedMap::<Complex64>::zero(space, 3, 1);
    f.add_term(0, vec![2, 0, 0, 1], Complex64::new(1.0, 0.0)).unwrap();
    let mut h1 = TruncatedMap::zero(space, 3, 1);
    h1.add_term(0, vec![2, 0, 0, 1], Complex64::new(0.0, 2.0)).unwrap();
    let mut h2 = TruncatedMap::zero(space, 3, 1);
    h2.add_term(0, vec![2, 0, 0, 1], Complex64::new(0.0, -1.0)).unwrap();
    let solved = majorant::moser_f(&[h1.clone(), h2.clone()]).unwrap();
    assert!((solved.coefficient(0, &[2, 0, 0, 1]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(solved.n_terms(), 1);
    // Incompatible data is rejected.
    let bad = majorant::moser_f(&[h1.clone(), h1.clone()]);
    assert!(bad.is_err());
    let mut averaged = TruncatedMap::zero(space, 3, 1);
    averaged.add_term(0, vec![1, 0, 1, 0], Complex64::new(1.0, 0.0)).unwrap();
    assert!(majorant::moser_f(&[averaged.clone(), h2]).is_err());
}

#[test]
fn series_inequality() {
    assert_eq!(majorant::composition_sum(2, 2), 1.0);
    for n in 1..=20 {
        let report = majorant::series_inequality_check(n, 1).unwrap();
        assert!((report.max_ratio - 1.0).abs() < 1e-15);
    }
    let s = MajorantConstants::new().s;
    assert!(4.0 * majorant::composition_sum(2, 2) <= 4.0 * s);
    let report = majorant::series_inequality_check(30, 5).unwrap();
    assert!(report.passed, "max ratio {} at {:?}", report.max_ratio, report.argmax);
    assert_eq!(report.cells, (1..=5).map(|r| 31 - r).sum::<usize>());
    assert!(majorant::series_inequality_check(41, 2).is_err());
}

#[test]
fn majorant_constants() {
    let c = MajorantConstants::default();
    assert!((c.s - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
    assert!(c.mu > 0.0506 && c.mu < 0.0508);
}

#[test]
fn norm_bound_examples() {
    let space = VarSpace::plain(3);
    let zero = TruncatedMap::<Rational>::zero(space, 4, 2);
    let b = zero.majorant_norm_bound(0.7, &BallWeights::unit(3, 2)).unwrap();
    assert_eq!((b.upper, b.lower), (0.0, 0.0));
    let mut mono = TruncatedMap::<Rational>::zero(space, 4, 1);
    mono.add_term(0, vec![3, 0, 0], q(-5, 2)).unwrap();
    let b = mono.majorant_norm_bound(0.7, &BallWeights::unit(3, 1)).unwrap();
    let expect = 2.5 * 0.7f64.powi(3);
    assert!((b.upper - expect).abs() < 1e-15 && (b.lower - expect).abs() < 1e-15);
}

/// For `F = c v²` the inverse is `G = Σ_n (−1)^n C_n c^{n+1} v^{n+2}` and its
/// modulus sums to `r[(1 − √(1 − 4cr))/(2cr) − 1]`.
#[test]
fn inversion_norm_bound_on_closed_form_family() {
    let mu = MajorantConstants::new().mu;
    for rho in [0.1, 0.5, 1.0, 3.0] {
        for factor in [1.0, 0.5, 0.25] {
            let f_norm = rho / std::f64::consts::E * factor;
            let c = f_norm / (rho * rho);
            let r = mu * rho;
            let g_norm = r * ((1.0 - (1.0 - 4.0 * c * r).sqrt()) / (2.0 * c * r) - 1.0);
            assert!(g_norm <= f_norm / 8.0, "rho={rho} factor={factor}");
            // The truncated series agrees with the closed form from below.
            let mut f = TruncatedMap::<Complex64>::zero(VarSpace::plain(1), 12, 1);
            f.add_term(0, vec![2], Complex64::new(c, 0.0)).unwrap();
            let g = f.invert_near_identity().unwrap();
            let bound = g.majorant_norm_bound(r, &BallWeights::unit(1, 1)).unwrap();
            assert!(bound.upper <= g_norm * (1.0 + 1e-12));
            assert!((bound.upper - g_norm).abs() <= 1e-6 * g_norm);
        }
    }
}

proptest! {
    #[test]
    fn upper_bound_dominates_lower(seed in any::<u64>(), rho in 0.05f64..2.0) {
        let mut rng = common::rng(seed);
        let f = random_map(&mut rng, 3, 2, 1, 4, 5);
        let w = BallWeights {
            input: vec![1.0, 2.0, 0.5],
            output: vec![1.0, 3.0],
        };
        let b = f.majorant_norm_bound(rho, &w).unwrap();
        prop_assert!(b.upper >= b.lower * (1.0 - 1e-14), "upper {} lower {}", b.upper, b.lower);
    }

    #[test]
    fn modulus_is_nonnegative_and_idempotent(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let f = random_map(&mut rng, 2, 2, 1, 5, 5);
        let m = f.modulus().unwrap();
        prop_assert!((0..2).all(|i| m.terms(i).all(|(_, c)| *c >= Rational::zero())));
        prop_assert_eq!(m.modulus().unwrap(), m);
    }
}
