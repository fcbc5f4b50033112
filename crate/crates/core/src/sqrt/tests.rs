use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

use super::*;
use crate::generators::{GenConfig, Generator, Rng};
use crate::kernel::{rref, spectral_norm};
use crate::scalar::{Backend, GaussianRational};

type C = Complex64;
type Q = GaussianRational;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn c(rows: &[&[i64]]) -> Matrix<C> {
    Matrix::from_i64_rows(rows)
}

fn ch(rows: &[&[i64]]) -> HermitianMatrix<C> {
    HermitianMatrix::from_i64_rows(rows).unwrap()
}

fn ones() -> HermitianMatrix<C> {
    ch(&[&[1, 1], &[1, 1]])
}

fn float_gen(seed: u64) -> Generator {
    Generator::new(GenConfig::new(seed, Backend::Float).with_dims(1, 6))
}

fn assert_reconstructs(rf: &SquareRootFactor<C>, a: &HermitianMatrix<C>, rel: f64) {
    let err = rf.gram().max_abs_diff(a);
    assert!(err <= rel * (1.0 + a.max_abs()), "R*R misses A by {err:e}");
}

#[test]
fn minimal_root_of_identity_is_unitary() {
    let rf = minimal_square_root(&HermitianMatrix::<C>::identity(3), &tol()).unwrap();
    assert_eq!(rf.hilbert_dim(), 3);
    assert!(rf.minimal);
    assert_reconstructs(&rf, &HermitianMatrix::identity(3), 1e-12);
    let rr = &rf.r * &rf.adjoint();
    assert!(rr.max_abs_diff(&Matrix::identity(3)) < 1e-12);
}

#[test]
fn minimal_root_of_zero_is_empty() {
    let rf = minimal_square_root(&HermitianMatrix::<C>::zeros(2), &tol()).unwrap();
    assert_eq!(rf.r.shape(), (0, 2));
    assert_eq!(rf.gram(), HermitianMatrix::zeros(2));
}

#[test]
fn minimal_root_of_all_ones_has_one_row() {
    let rf = minimal_square_root(&ones(), &tol()).unwrap();
    assert_eq!(rf.r.shape(), (1, 2));
    assert_reconstructs(&rf, &ones(), 1e-12);
    // Up to a phase the row is (1, 1).
    let phase = rf.r[(0, 0)];
    assert!((phase.norm() - 1.0).abs() < 1e-12);
    assert!((rf.r[(0, 1)] - phase).norm() < 1e-12);
}

#[test]
fn square_roots_reject_indefinite_and_exact_input() {
    let indefinite = ch(&[&[1, 2], &[2, 1]]);
    assert!(matches!(minimal_square_root(&indefinite, &tol()), Err(Error::NotNonNegative)));
    assert!(matches!(cholesky_square_root(&indefinite, &tol()), Err(Error::NotNonNegative)));
    let exact = HermitianMatrix::<Q>::identity(2);
    assert!(matches!(minimal_square_root(&exact, &tol()), Err(Error::ExactSquareRoot)));
}

#[test]
fn cholesky_root_matches_the_contract() {
    let a = ch(&[&[4, 2, 2], &[2, 2, 1], &[2, 1, 1]]);
    let rf = cholesky_square_root(&a, &tol()).unwrap();
    assert_reconstructs(&rf, &a, 1e-12);
    assert_eq!(rf.hilbert_dim(), rank(&a, &tol()));
}

#[test]
fn padded_roots() {
    let mut rng = Rng::new(5);
    let rf = nonminimal_square_root(&HermitianMatrix::identity(2), 1, &mut rng, &tol()).unwrap();
    assert_eq!(rf.r.shape(), (3, 2));
    assert!(!rf.minimal);
    assert_reconstructs(&rf, &HermitianMatrix::identity(2), 1e-12);

    let rf = nonminimal_square_root(&ones(), 2, &mut rng, &tol()).unwrap();
    assert_eq!(rf.r.shape(), (3, 2));
    assert_eq!(rank(&rf.r, &tol()), 1);
    assert_reconstructs(&rf, &ones(), 1e-12);

    let rf = nonminimal_square_root(&ones(), 0, &mut rng, &tol()).unwrap();
    assert!(rf.minimal);
    assert_eq!(rf.hilbert_dim(), 1);
}

#[test]
fn generalized_inverse_examples() {
    let t = tol();
    let id = SquareRootFactor::from_factor(Matrix::<Q>::identity(3), &t);
    let x = Matrix::from_i64_rows(&[&[3], &[-1], &[7]]);
    assert_eq!(generalized_inverse_apply(&id, &x, &t).unwrap(), x);

    // R* = (1,1)ᵀ, so R*h = (1,1)ᵀ forces h = 1.
    let row = SquareRootFactor::from_factor(Matrix::<Q>::from_i64_rows(&[&[1, 1]]), &t);
    let h = generalized_inverse_apply(&row, &Matrix::from_i64_rows(&[&[1], &[1]]), &t).unwrap();
    assert_eq!(h, Matrix::from_i64_rows(&[&[1]]));
    let outside = generalized_inverse_apply(&row, &Matrix::from_i64_rows(&[&[1], &[-1]]), &t);
    assert!(matches!(outside, Err(Error::OutsideRange)));
}

/// `sup_x |⟨x′,x⟩|²/‖Rx‖²` over sampled `x` with `Rx ≠ 0`.
fn sampled_sup(r: &Matrix<C>, xprime: &Matrix<C>, seed: u64, samples: usize) -> f64 {
    let mut g = float_gen(seed);
    let mut best = 0.0f64;
    for _ in 0..samples {
        let x = g.vector::<C>(r.cols());
        let denom = Matrix::inner(&(r * &x), &(r * &x)).re;
        if denom > 1e-12 {
            best = best.max(Matrix::inner(xprime, &x).norm_sqr() / denom);
        }
    }
    best
}

#[test]
fn membership_examples() {
    let t = tol();
    let id = SquareRootFactor::from_factor(Matrix::<Q>::identity(2), &t);
    let x = Matrix::from_i64_rows(&[&[2], &[-3]]);
    let cert = membership_ran_rstar(&id, &x, &t).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.sup, Some(Q::from_i64(13)));

    let row = SquareRootFactor::from_factor(Matrix::<Q>::from_i64_rows(&[&[1, 1]]), &t);
    let cert = membership_ran_rstar(&row, &Matrix::from_i64_rows(&[&[1], &[-1]]), &t).unwrap();
    assert!(!cert.annihilates_kernel);
    assert!(!cert.sup_finite);
    assert!(!cert.is_member());

    // h = 2 solves R*h = (2,2)ᵀ, so the supremum is ‖h‖² = 4.
    let cert = membership_ran_rstar(&row, &Matrix::from_i64_rows(&[&[2], &[2]]), &t).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.sup, Some(Q::from_i64(4)));

    let r = c(&[&[1, 1]]);
    let xp = c(&[&[2], &[2]]);
    let sampled = sampled_sup(&r, &xp, 3, 2000);
    assert!(sampled <= 4.0 + 1e-9);
    assert!(sampled > 3.99);
}

#[test]
fn douglas_examples() {
    let t = tol();
    let id = HermitianMatrix::<C>::identity(2);
    let f = douglas_factorization(&id, &id, 1.0, &t).unwrap();
    assert!((f.op_norm_w - 1.0).abs() < 1e-12);
    assert!((&f.w.adjoint() * &f.w).max_abs_diff(&Matrix::identity(2)) < 1e-12);

    let a = ch(&[&[1, 0], &[0, 0]]);
    let f = douglas_factorization(&a, &id, 1.0, &t).unwrap();
    assert!((f.op_norm_w - 1.0).abs() < 1e-12);
    assert!((&f.root_d.adjoint() * &f.w).max_abs_diff(&f.root_a.adjoint()) < 1e-12);
    assert_douglas_ranges(&f);

    let zero = HermitianMatrix::<C>::zeros(2);
    assert!(matches!(douglas_factorization(&id, &zero, 1.0, &t), Err(Error::OrderViolated)));
}

fn assert_douglas_ranges(f: &DouglasFactorization<C>) {
    let t = tol();
    let ran_w = Subspace::column_space(&f.w, &t);
    assert!(Subspace::column_space(&f.root_d.r, &t).contains(&ran_w, &t).unwrap());
    let ker_w = Subspace::kernel(&f.w, &t);
    assert!(ker_w.equals(&Subspace::kernel(&f.root_a.adjoint(), &t), &t).unwrap());
}

#[test]
fn linking_isometry_examples() {
    let t = tol();
    let a = ch(&[&[2, 1], &[1, 3]]);
    let s = minimal_square_root(&a, &t).unwrap();
    let u = linking_isometry(&s, &s, &t).unwrap();
    assert!(u.max_abs_diff(&Matrix::identity(2)) < 1e-12);

    let mut rng = Rng::new(8);
    let r = nonminimal_square_root(&a, 2, &mut rng, &t).unwrap();
    let u = linking_isometry(&r, &s, &t).unwrap();
    assert_eq!(u.shape(), (4, 2));
    assert!((&u * &s.r).max_abs_diff(&r.r) < 1e-10);
    assert!((&u.adjoint() * &u).max_abs_diff(&Matrix::identity(2)) < 1e-10);

    let zero = HermitianMatrix::<C>::zeros(2);
    let s0 = minimal_square_root(&zero, &t).unwrap();
    assert_eq!(linking_isometry(&s0, &s0, &t).unwrap().shape(), (0, 0));

    let other = minimal_square_root(&HermitianMatrix::identity(2), &t).unwrap();
    assert!(matches!(linking_isometry(&other, &s, &t), Err(Error::FactorMismatch(_))));
}

#[test]
fn range_additivity_examples() {
    let t = tol();
    let report = verify_range_additivity(&Matrix::<Q>::identity(3), &Matrix::zeros(3, 3), &t).unwrap();
    assert!(report.holds);
    assert_eq!(report.summed.dim(), 3);

    let e1 = Matrix::<C>::from_i64_rows(&[&[1, 0]]);
    let e2 = Matrix::<C>::from_i64_rows(&[&[0, 1]]);
    let report = verify_range_additivity(&e1, &e2, &t).unwrap();
    assert!(report.holds);
    assert_eq!(report.minimal_root_range.unwrap().dim(), 2);
}

#[test]
fn range_additivity_on_rational_factors() {
    let t = tol();
    let mut g = Generator::new(GenConfig::new(31, Backend::Rational));
    for _ in 0..20 {
        let r1 = g.matrix::<Q>(3, 4);
        let mut r2 = g.matrix::<Q>(3, 4);
        // Make the two row spaces overlap.
        for j in 0..4 {
            r2[(0, j)] = r1[(1, j)].clone();
        }
        let report = verify_range_additivity(&r1, &r2, &t).unwrap();
        assert!(report.holds);
        let joined = r1.adjoint().hstack(&r2.adjoint());
        let a = HermitianMatrix::gram(&r1.vstack(&r2));
        assert_eq!(rref(&joined).1.len(), rref(&a).1.len());
        assert_eq!(report.summed.dim(), rref(&a).1.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factors_share_the_kernel_of_a(seed in any::<u64>(), pad in 0usize..3) {
        let t = tol();
        let mut g = float_gen(seed);
        let n = g.dim();
        let a: HermitianMatrix<C> = g.psd_any_rank(n);
        let ker_a = Subspace::kernel(&a, &t);
        let minimal = minimal_square_root(&a, &t).unwrap();
        let chol = cholesky_square_root(&a, &t).unwrap();
        let padded = nonminimal_square_root(&a, pad, g.rng(), &t).unwrap();
        for rf in [&minimal, &chol, &padded] {
            assert_reconstructs(rf, &a, 1e-9);
            prop_assert!(Subspace::kernel(&rf.r, &t).equals(&ker_a, &t).unwrap());
            // Range of R* is ran A for every factor.
            let ran = Subspace::column_space(&rf.adjoint(), &t);
            prop_assert!(ran.equals(&Subspace::column_space(&a, &t), &t).unwrap());
        }
        prop_assert_eq!(minimal.hilbert_dim(), rank(&a, &t));
        prop_assert!(minimal.minimal);
        for k in 0..ker_a.dim() {
            let x = ker_a.basis().column(k);
            prop_assert!(a.quadratic_form(&x).norm() < 1e-9 * (1.0 + a.max_abs()));
            prop_assert!((&*a * &x).max_abs() < 1e-8 * (1.0 + a.max_abs()));
        }
    }

    #[test]
    fn generalized_inverse_is_a_right_inverse_on_ran_a(seed in any::<u64>()) {
        let t = tol();
        let mut g = float_gen(seed);
        let n = g.dim();
        let a: HermitianMatrix<C> = g.psd_any_rank(n);
        let rf = minimal_square_root(&a, &t).unwrap();
        let xprime = &*a * &g.vector::<C>(n);
        let h = generalized_inverse_apply(&rf, &xprime, &t).unwrap();
        prop_assert!((&rf.adjoint() * &h).max_abs_diff(&xprime) <= 1e-9 * (1.0 + xprime.max_abs()));
        let cert = membership_ran_rstar(&rf, &xprime, &t).unwrap();
        prop_assert!(cert.is_member());
        let sup = cert.sup.unwrap().re;
        let sampled = sampled_sup(&rf.r, &xprime, seed ^ 1, 200);
        prop_assert!(sampled <= sup * (1.0 + 1e-8) + 1e-9);
    }

    #[test]
    fn order_implies_range_inclusion(seed in any::<u64>()) {
        let t = tol();
        let mut g = float_gen(seed);
        let n = g.dim();
        let a: HermitianMatrix<C> = g.psd_any_rank(n);
        let extra: HermitianMatrix<C> = g.psd_any_rank(n);
        let d = a.add(&extra);
        prop_assert!(range_inclusion(&a, &d, &t).unwrap());
        let f = douglas_factorization(&a, &d, 1.0, &t).unwrap();
        prop_assert!(f.op_norm_w <= 1.0 + 1e-9);
        prop_assert!((&f.root_d.adjoint() * &f.w).max_abs_diff(&f.root_a.adjoint()) <= 1e-9 * (1.0 + a.max_abs()));
        assert_douglas_ranges(&f);
        let w2 = douglas_factor_normal_equations(&f.root_a, &f.root_d).unwrap();
        prop_assert!(agree(&w2, &f.w, 1e-9));
        prop_assert!((spectral_norm(&w2) - f.op_norm_w).abs() < 1e-9);
    }
}
