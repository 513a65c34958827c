mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use toda_birkhoff::fourier::{self, ModeCoords};
use toda_birkhoff::lattice::LatticeState;
use toda_birkhoff::spectral::{self, FlaschkaCoords, FlaschkaFourier, ZCoords};

type CMatrix = DMatrix<Complex64>;

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

fn random_modes(rng: &mut rand_chacha::ChaCha8Rng, n: usize, amp: f64) -> ModeCoords {
    ModeCoords::real(common::complex_vec(rng, n - 1, amp)).unwrap()
}

fn fourier_diff(a: &FlaschkaFourier, b: &FlaschkaFourier, scale: f64) -> FlaschkaFourier {
    let sub = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        x.iter().zip(y).map(|(u, v)| (u - v) * scale).collect()
    };
    FlaschkaFourier {
        b_hat: sub(&a.b_hat, &b.b_hat),
        a_hat: sub(&a.a_hat, &b.a_hat),
    }
}

fn z_combination(terms: &[(f64, &ZCoords)]) -> ZCoords {
    let n = terms[0].1.n();
    let mut z = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut w = z.clone();
    for (c, t) in terms {
        for k in 0..n - 1 {
            z[k] += *c * t.z()[k];
            w[k] += *c * t.w()[k];
        }
    }
    ZCoords::new(z, w).unwrap()
}

#[test]
fn free_spectrum_closed_form() {
    for n in [2, 4, 8, 32, 257] {
        let free = spectral::unperturbed_spectrum(n).unwrap();
        let computed = spectral::eigen_doubled(&FlaschkaCoords::zero(n).unwrap()).unwrap();
        for j in 1..n {
            let expect = -2.0 * (j as f64 * std::f64::consts::PI / n as f64).cos();
            assert!((free.lambdas()[2 * j] - expect).abs() < 1e-12);
            assert!((computed.lambdas()[2 * j] - expect).abs() < 1e-12);
            assert!((computed.lambdas()[2 * j - 1] - expect).abs() < 1e-12);
        }
        assert!(computed.residual() < 1e-10);
        assert!(computed.gaps().iter().all(|g| g.abs() <= 1e-10));
        assert!(free.gaps().iter().all(|&g| g == 0.0));
        let v = free.eigvecs().unwrap();
        let gram = v.transpose() * v;
        assert!((gram - DMatrix::<f64>::identity(2 * n, 2 * n)).amax() < 1e-13);
    }
}

#[test]
fn small_spectra_examples() {
    let l = spectral::unperturbed_spectrum(2).unwrap();
    assert_eq!(l.lambdas().len(), 4);
    let expect2 = [-2.0, 0.0, 0.0, 2.0];
    assert!(common::max_abs_diff(l.lambdas(), &expect2) < 1e-15);
    let r = std::f64::consts::SQRT_2;
    let expect4 = [-2.0, -r, -r, 0.0, 0.0, r, r, 2.0];
    let computed = spectral::eigen_doubled(&FlaschkaCoords::zero(4).unwrap()).unwrap();
    assert!(common::max_abs_diff(computed.lambdas(), &expect4) < 1e-14);
    // Separation between clusters 0 and 1 at N = 4.
    let sep = (computed.lambdas()[0] - computed.lambdas()[2]).abs();
    assert!((sep - 0.585_786_437_6).abs() < 1e-9 && sep >= 4.0 / 16.0);
}

#[test]
fn free_separation_bound() {
    for n in [4, 8, 16, 64] {
        for j in 0..=n / 2 {
            for k in 0..=n / 2 {
                if j == k {
                    continue;
                }
                let d = (spectral::free_eigenvalue(n, j as i64) - spectral::free_eigenvalue(n, k as i64)).abs();
                let bound = 4.0 * (j as f64 * j as f64 - k as f64 * k as f64).abs() / (n * n) as f64;
                assert!(d >= bound - 1e-15, "N={n} j={j} k={k}");
            }
        }
    }
}

#[test]
fn free_eigenvectors_are_eigenvectors() {
    for n in [3, 6, 11] {
        let l = to_complex(&spectral::build_doubled_jacobi(&FlaschkaCoords::zero(n).unwrap()));
        for m in -(n as i64)..(n as i64) {
            let g = spectral::free_eigenvector(n, m);
            let r = &l * &g - &g * Complex64::new(spectral::free_eigenvalue(n, m), 0.0);
            assert!(r.norm() < 1e-14);
            assert!((g.norm() - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn eigensolver_quality_on_perturbed_matrices() {
    let mut rng = common::rng(30);
    for n in [4, 8, 16, 32] {
        for _ in 0..10 {
            let f = common::constrained_flaschka(&mut rng, n, 1e-2);
            let l = spectral::build_doubled_jacobi(&f);
            assert_eq!(l, l.transpose());
            let spec = spectral::eigen_doubled(&f).unwrap();
            let lnorm = l.norm();
            assert!(spec.residual() <= 1e-10 * lnorm);
            let v = spec.eigvecs().unwrap();
            assert!((v.transpose() * v - DMatrix::<f64>::identity(2 * n, 2 * n)).amax() < 1e-12);
            assert!(spec.lambdas().windows(2).all(|w| w[0] <= w[1]));
            assert!(spec.gaps().iter().all(|&g| g >= -spec.residual()));
            let again = spectral::eigen_doubled(&f).unwrap();
            assert_eq!(again.lambdas(), spec.lambdas());
            assert_eq!(again.eigvecs(), spec.eigvecs());
        }
    }
}

#[test]
fn eigenvalues_move_linearly_with_the_perturbation() {
    let mut rng = common::rng(31);
    let mut worst = 0.0_f64;
    for n in [4, 8, 16, 32] {
        for _ in 0..20 {
            let eps = rng.gen_range(1e-5..1e-3);
            let f = common::constrained_flaschka(&mut rng, n, eps);
            let norm = f.norm(0.0, 0.0);
            let spec = spectral::eigen_doubled(&f).unwrap();
            let free = spectral::unperturbed_spectrum(n).unwrap();
            for (a, b) in spec.lambdas().iter().zip(free.lambdas()) {
                worst = worst.max((a - b).abs() / norm);
            }
        }
    }
    assert!(worst <= 10.0, "observed constant {worst}");
}

#[test]
fn flaschka_examples_and_roundtrip() {
    let z = spectral::flaschka(&LatticeState::zero(5).unwrap());
    assert!(z.b().iter().chain(z.a()).all(|&x| x == 0.0));
    let f = spectral::flaschka(&LatticeState::new(vec![1.0, -1.0], vec![0.0, 0.0]).unwrap());
    assert_eq!(f.b(), &[-1.0, 1.0]);
    assert_eq!(f.a(), &[0.0, 0.0]);
    let mut rng = common::rng(32);
    for n in [2, 5, 16, 33] {
        for _ in 0..20 {
            let state = common::reduced_state(&mut rng, n, 0.5);
            let f = spectral::flaschka(&state);
            assert!(f.is_constrained());
            let back = spectral::inverse_flaschka(&f).unwrap();
            assert!(common::max_abs_diff(back.p(), state.p()) < 1e-12);
            assert!(common::max_abs_diff(back.q(), state.q()) < 1e-12);
        }
    }
    let bad = FlaschkaCoords::new(vec![0.0, 0.0], vec![-1.0, 0.5]).unwrap();
    assert!(spectral::inverse_flaschka(&bad).is_err());
    let unbalanced = FlaschkaCoords::new(vec![0.0, 0.0], vec![0.1, 0.1]).unwrap();
    assert!(!unbalanced.is_constrained());
    assert!(spectral::inverse_flaschka(&unbalanced).is_err());
}

#[test]
fn projectors_at_rest_and_nearby() {
    let mut rng = common::rng(33);
    for n in [4, 8, 16] {
        for j in 0..=n {
            let p0 = spectral::free_projector(n, j).unwrap();
            let rank = if j == 0 || j == n { 1.0 } else { 2.0 };
            assert!((p0.trace() - rank).abs() < 1e-13);
            assert!((&p0 * &p0 - &p0).amax() < 1e-13);
        }
        let mut ratio = 0.0_f64;
        for _ in 0..5 {
            let f = common::constrained_flaschka(&mut rng, n, 1e-4);
            let spec = spectral::eigen_doubled(&f).unwrap();
            for j in 0..=n {
                let p = spectral::projector_from_spectrum(&spec, j).unwrap();
                assert!((&p * &p - &p).amax() < 1e-10);
                let p0 = spectral::free_projector(n, j).unwrap();
                ratio = ratio.max((&p - &p0).norm() / f.norm(0.0, 0.0));
            }
        }
        assert!(ratio.is_finite() && ratio < 1e4, "ratio {ratio}");
    }
}

#[test]
fn contour_projector_matches_eigen_projector() {
    let mut rng = common::rng(34);
    for n in [4, 8, 16] {
        for j in 0..=n {
            let zero = FlaschkaCoords::zero(n).unwrap();
            let pc = spectral::projector_contour(&zero, j, 64).unwrap();
            let p0 = to_complex(&spectral::free_projector(n, j).unwrap());
            assert!((&pc - &p0).camax() < 1e-10);
            let rank = if j == 0 || j == n { 1.0 } else { 2.0 };
            assert!((pc.trace() - Complex64::new(rank, 0.0)).norm() < 1e-10);
        }
        let f = common::constrained_flaschka(&mut rng, n, 1e-4);
        for j in 0..=n {
            let p = to_complex(&spectral::projector(&f, j).unwrap());
            let pc = spectral::projector_contour(&f, j, 128).unwrap();
            assert!((&p - &pc).camax() < 1e-8, "N={n} j={j}");
        }
    }
    assert!(spectral::projector_contour(&FlaschkaCoords::zero(4).unwrap(), 1, 8).is_err());
}

#[test]
fn contour_quadrature_converges_spectrally() {
    let mut rng = common::rng(35);
    let n = 8;
    let f = common::constrained_flaschka(&mut rng, n, 1e-3);
    for j in [1, 3, 4] {
        let p = to_complex(&spectral::projector(&f, j).unwrap());
        let e16 = (&spectral::projector_contour(&f, j, 16).unwrap() - &p).camax();
        let e32 = (&spectral::projector_contour(&f, j, 32).unwrap() - &p).camax();
        let e128 = (&spectral::projector_contour(&f, j, 128).unwrap() - &p).camax();
        assert!(e32 < 1e-2 * e16 || e32 < 1e-12, "{e16} {e32}");
        assert!(e128 <= e32.max(1e-12));
    }
}

#[test]
fn transformation_operators() {
    let mut rng = common::rng(36);
    for n in [4, 8, 16] {
        let zero = FlaschkaCoords::zero(n).unwrap();
        for j in 1..n {
            let u = spectral::transform_u(&zero, j).unwrap();
            assert!((&u - spectral::free_projector(n, j).unwrap()).amax() < 1e-12);
        }
        let f = common::constrained_flaschka(&mut rng, n, 1e-3);
        let spec = spectral::eigen_doubled(&f).unwrap();
        for j in 1..n {
            let u = spectral::transform_u_from_spectrum(&spec, j).unwrap();
            let p = spectral::projector_from_spectrum(&spec, j).unwrap();
            let uc = to_complex(&u);
            for m in [j as i64, -(j as i64)] {
                let g = spectral::free_eigenvector(n, m);
                let ug = &uc * &g;
                // (U3) isometry on the free eigenspace.
                assert!((ug.norm() - 1.0).abs() < 1e-10);
                // (U1) the image lies in the perturbed eigenspace.
                let pug = to_complex(&p) * &ug;
                assert!((&pug - &ug).norm() < 1e-10);
                // (U2) conjugation commutes with U for real data.
                let lhs = ug.map(|z| z.conj());
                let rhs = &uc * g.map(|z| z.conj());
                assert!((lhs - rhs).norm() < 1e-12);
            }
            // Binomial series (1 − x)^{−1/2} = Σ c_m x^m applied to D² = (P − P₀)².
            let d = &p - spectral::free_projector(n, j).unwrap();
            let d2 = &d * &d;
            let mut term = DMatrix::<f64>::identity(2 * n, 2 * n);
            let mut series = term.clone();
            let mut c = 1.0;
            for m in 1..30 {
                c *= (2 * m - 1) as f64 / (2 * m) as f64;
                term = &term * &d2;
                series += &term * c;
            }
            assert!((series * &p - &u).amax() < 1e-10);
        }
    }
}

#[test]
fn z_map_at_rest_and_reality() {
    for n in [2, 4, 8] {
        let z = spectral::z_map(&FlaschkaCoords::zero(n).unwrap()).unwrap();
        assert!(z.z().iter().chain(z.w()).all(|x| x.norm() < 1e-12));
    }
    let mut rng = common::rng(37);
    for n in [4, 8, 16] {
        for _ in 0..10 {
            let f = common::constrained_flaschka(&mut rng, n, 1e-3);
            let z = spectral::z_map(&f).unwrap();
            for (a, b) in z.z().iter().zip(z.w()) {
                assert!((a.conj() - b).norm() <= 1e-12);
            }
        }
    }
}

/// The gap identity with the normalisation produced by the pairing and
/// `D_j = (2ω_j/N)^{−1/2}`: `γ_j² = (8/N)ω_j|z_j|²`.
#[test]
fn gap_identity_with_consistent_normalisation() {
    let mut rng = common::rng(38);
    for n in [4, 8, 16, 32] {
        for _ in 0..10 {
            let f = common::constrained_flaschka(&mut rng, n, 1e-3);
            let spec = spectral::eigen_doubled(&f).unwrap();
            let z = spectral::z_map(&f).unwrap();
            for j in 1..n {
                let g2 = spec.gap(j).powi(2);
                let rhs = 8.0 / n as f64 * fourier::omega(n, j).unwrap() * z.z()[j - 1].norm_sqr();
                assert!((g2 - rhs).abs() <= 1e-10 * g2.max(1e-12), "N={n} j={j}: {g2} vs {rhs}");
            }
        }
    }
}

#[test]
fn linearisation_of_theta_matches_finite_differences() {
    let mut rng = common::rng(39);
    let h = 1e-5;
    for n in [4, 8, 16] {
        let m = random_modes(&mut rng, n, 1.0);
        let plus = spectral::theta_xi(&m.scaled(Complex64::new(h, 0.0))).unwrap().fourier();
        let minus = spectral::theta_xi(&m.scaled(Complex64::new(-h, 0.0))).unwrap().fourier();
        let fd = fourier_diff(&plus, &minus, 1.0 / (2.0 * h));
        let exact = spectral::dtheta_xi_zero(&m);
        assert!(common::max_abs_diff_c(&fd.b_hat, &exact.b_hat) < 1e-6);
        assert!(common::max_abs_diff_c(&fd.a_hat, &exact.a_hat) < 1e-6);
        assert_eq!(exact.b_hat[0], Complex64::new(0.0, 0.0));
        assert_eq!(exact.a_hat[0], Complex64::new(0.0, 0.0));
    }
}

#[test]
fn linearisation_of_z_matches_finite_differences() {
    let mut rng = common::rng(40);
    let h = 1e-5;
    for n in [4, 8, 16] {
        let v = FlaschkaCoords::new(common::uniform_vec(&mut rng, n, 1.0), common::uniform_vec(&mut rng, n, 1.0))
            .unwrap();
        let plus = spectral::z_map(&v.scaled(h)).unwrap();
        let minus = spectral::z_map(&v.scaled(-h)).unwrap();
        let fd = z_combination(&[(0.5 / h, &plus), (-0.5 / h, &minus)]);
        let exact = spectral::dz_zero(&v.fourier());
        assert!(fd.max_distance(&exact) < 1e-6, "N={n}: {}", fd.max_distance(&exact));
    }
}

#[test]
fn linearised_z_edge_asymptotics() {
    let n = 256;
    let mut rng = common::rng(41);
    let v = FlaschkaCoords::new(common::uniform_vec(&mut rng, n, 1.0), common::uniform_vec(&mut rng, n, 1.0)).unwrap();
    let fh = v.fourier();
    let dz = spectral::dz_zero(&fh);
    for j in 1..4 {
        let approx = (fh.b_hat[j] - 2.0 * fh.a_hat[j]) / (2.0 * fourier::omega(n, j).unwrap()).sqrt();
        let scale = (fh.b_hat[j].norm() + 2.0 * fh.a_hat[j].norm()) / (2.0 * fourier::omega(n, j).unwrap()).sqrt();
        assert!((dz.z()[j - 1] - approx).norm() <= 4.0 * j as f64 / n as f64 * scale);
    }
}

#[test]
fn psi_is_tangent_to_identity_and_real() {
    let mut rng = common::rng(42);
    let h = 1e-5;
    for n in [4, 8, 16] {
        let zero = spectral::psi_map(&ModeCoords::zero(n).unwrap()).unwrap();
        assert!(zero.xi().iter().chain(zero.eta()).all(|x| x.norm() < 1e-12));
        let m = random_modes(&mut rng, n, 1.0);
        let plus = spectral::psi_map(&m.scaled(Complex64::new(h, 0.0))).unwrap();
        let minus = spectral::psi_map(&m.scaled(Complex64::new(-h, 0.0))).unwrap();
        let fd = plus.axpy(Complex64::new(-1.0, 0.0), &minus).unwrap().scaled(Complex64::new(0.5 / h, 0.0));
        assert!(common::max_abs_diff_c(fd.xi(), m.xi()) < 1e-6);
        assert!(common::max_abs_diff_c(fd.eta(), m.eta()) < 1e-6);
        let small = random_modes(&mut rng, n, 1e-2);
        let psi = spectral::psi_map(&small).unwrap();
        assert!(psi.is_real(1e-12));
    }
}

#[test]
fn matrix_elements_match_dense_oracle() {
    let mut rng = common::rng(43);
    for n in [3, 4, 7, 8] {
        let f = FlaschkaCoords::new(common::uniform_vec(&mut rng, n, 0.1), common::uniform_vec(&mut rng, n, 0.1)).unwrap();
        let lp = to_complex(&(spectral::build_doubled_jacobi(&f)
            - spectral::build_doubled_jacobi(&FlaschkaCoords::zero(n).unwrap())));
        let fh = f.fourier();
        let size = 2 * n as i64;
        for j in 0..size {
            let lg = &lp * spectral::free_eigenvector(n, j);
            for k in 0..size {
                let gk = spectral::free_eigenvector(n, k);
                let dense: Complex64 = lg.iter().zip(gk.iter()).map(|(a, b)| a * b.conj()).sum();
                let formula = spectral::perturbation_element(&fh, j, k);
                assert!((dense - formula).norm() < 1e-12, "N={n} j={j} k={k}");
            }
        }
    }
}

#[test]
fn second_order_taylor_remainder_is_cubic() {
    let mut rng = common::rng(44);
    for n in [4, 8, 16] {
        let v = common::constrained_flaschka(&mut rng, n, 1.0);
        let v = FlaschkaCoords::new(v.b().to_vec(), v.a().to_vec()).unwrap();
        let fh = v.fourier();
        let d1 = spectral::dz_zero(&fh);
        let d2 = spectral::z2_taylor(&fh);
        let remainder = |eps: f64| {
            let z = spectral::z_map(&v.scaled(eps)).unwrap();
            let model = z_combination(&[(eps, &d1), (eps * eps, &d2)]);
            z.max_distance(&model)
        };
        let eps = [4e-3, 2e-3, 1e-3];
        let r: Vec<f64> = eps.iter().map(|&e| remainder(e)).collect();
        let slope = (r[0] / r[1]).log2();
        let slope2 = (r[1] / r[2]).log2();
        assert!((slope - 3.0).abs() < 0.2 && (slope2 - 3.0).abs() < 0.2, "N={n}: {slope} {slope2}");
        let zero = spectral::z2_taylor(&FlaschkaCoords::zero(n).unwrap().fourier());
        assert!(zero.z().iter().all(|x| x.norm() == 0.0));
    }
}

#[test]
fn gaps_of_state_vanish_at_rest() {
    let g = spectral::gaps_of_state(&LatticeState::zero(6).unwrap()).unwrap();
    assert!(g.iter().all(|x| x.abs() < 1e-12));
    let spec = spectral::unperturbed_spectrum(6).unwrap();
    assert_eq!(*spec.cluster(0).unwrap().start(), 0);
    assert_eq!(*spec.cluster(6).unwrap().start(), 11);
    assert!(spec.cluster(7).is_err());
}
