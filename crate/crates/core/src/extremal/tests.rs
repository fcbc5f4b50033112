use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

use super::*;
use crate::generators::{GenConfig, Generator};
use crate::scalar::{Backend, Complex64, GaussianRational};
use crate::schur::{minimal_completion, shorted_operator};

type C = Complex64;
type Q = GaussianRational;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn qh(rows: &[&[i64]]) -> HermitianMatrix<Q> {
    HermitianMatrix::from_i64_rows(rows).unwrap()
}

fn ch(rows: &[&[i64]]) -> HermitianMatrix<C> {
    HermitianMatrix::from_i64_rows(rows).unwrap()
}

fn col<S: Scalar>(v: &[i64]) -> Matrix<S> {
    Matrix::from_fn(v.len(), 1, |i, _| S::from_i64(v[i]))
}

#[test]
fn is_extremal_examples() {
    let t = tol();
    let block = |rows: &[&[i64]]| Block2::from_hermitian(&qh(rows), 1).unwrap();
    assert!(is_extremal(&block(&[&[1, 1], &[1, 1]]), &t).unwrap());
    assert!(!is_extremal(&block(&[&[2, 1], &[1, 1]]), &t).unwrap());
    assert!(is_extremal(&block(&[&[1, 0], &[0, 0]]), &t).unwrap());
    assert!(matches!(is_extremal(&block(&[&[1, 2], &[2, 1]]), &t), Err(Error::NotNonNegative)));
}

#[test]
fn criteria_examples() {
    let t = tol();
    let ones = Block2::from_hermitian(&ch(&[&[1, 1], &[1, 1]]), 1).unwrap();
    let report = extremality_criteria(&ones, &t).unwrap();
    assert!(report.sigma_vanishes && report.infimum_vanishes && report.range_meets_y_trivially);
    assert_eq!(report.root_ranges_coincide, Some(true));
    assert!(report.criteria_agree());

    let id = Block2::from_hermitian(&ch(&[&[1, 0], &[0, 1]]), 1).unwrap();
    let report = extremality_criteria(&id, &t).unwrap();
    assert!(!report.sigma_vanishes && !report.infimum_vanishes && !report.range_meets_y_trivially);
    assert_eq!(report.root_ranges_coincide, Some(false));
    assert!(!report.is_extremal);

    let exact = Block2::from_hermitian(&qh(&[&[1, 1], &[1, 1]]), 1).unwrap();
    let report = extremality_criteria(&exact, &t).unwrap();
    assert!(report.is_extremal && report.criteria_agree());
    assert_eq!(report.root_ranges_coincide, None);
    assert_eq!(report.h1_dim, None);
}

#[test]
fn double_omega_examples() {
    let t = tol();
    let ones = qh(&[&[1, 1], &[1, 1]]);
    assert_eq!(double_omega(&ones, &col(&[1, 1]), &t).unwrap(), ones);
    assert!(is_doubly_extremal(&ones, &col(&[1, 1]), &t).unwrap());

    let id = qh(&[&[1, 0], &[0, 1]]);
    assert_eq!(double_omega(&id, &col(&[1, 0]), &t).unwrap(), qh(&[&[1, 0], &[0, 0]]));
    assert!(!is_doubly_extremal(&id, &col(&[1, 0]), &t).unwrap());

    let a = qh(&[&[2, 1], &[1, 1]]);
    assert_eq!(double_omega(&a, &Matrix::zeros(2, 1), &t).unwrap(), HermitianMatrix::zeros(2));

    let zero = HermitianMatrix::<Q>::zeros(2);
    assert!(is_doubly_extremal(&zero, &Matrix::zeros(2, 1), &t).unwrap());

    let projected = double_omega_projection(&ch(&[&[1, 0], &[0, 1]]), &col(&[1, 0]), &t).unwrap();
    assert!(projected.max_abs_diff(&ch(&[&[1, 0], &[0, 0]])) < 1e-12);
}

#[test]
fn not_a_positive_pair_is_rejected() {
    let t = tol();
    let a = qh(&[&[1, 0], &[0, 0]]);
    let b = col::<Q>(&[0, 1]);
    assert!(matches!(is_doubly_extremal(&a, &b, &t), Err(Error::NotPositivePair(_))));
    assert!(matches!(kernel_equality_check(&a, &b, &t), Err(Error::NotPositivePair(_))));
}

#[test]
fn h1_examples() {
    let t = tol();
    let ones = ch(&[&[1, 1], &[1, 1]]);
    assert!(h1_subspace(&ones, &col(&[1, 1]), &t).unwrap().is_zero());

    let id = ch(&[&[1, 0], &[0, 1]]);
    let h1 = h1_subspace(&id, &col(&[1, 0]), &t).unwrap();
    assert_eq!(h1.dim(), 1);
    let e2 = Subspace::column_space(&col(&[0, 1]), &t);
    assert!(h1.equals(&e2, &t).unwrap());

    let a = ch(&[&[2, 1], &[1, 1]]);
    let h1 = h1_subspace(&a, &Matrix::zeros(2, 1), &t).unwrap();
    assert_eq!(h1.dim(), 2);
}

#[test]
fn kernel_equality_examples() {
    let t = tol();
    let ones = kernel_equality_check(&qh(&[&[1, 1], &[1, 1]]), &col(&[1, 1]), &t).unwrap();
    assert!(ones.kernels_equal && ones.doubly_extremal);
    assert!(ones.ker_a.equals(&Subspace::column_space(&col(&[1, -1]), &t), &t).unwrap());

    let id = kernel_equality_check(&qh(&[&[1, 0], &[0, 1]]), &col(&[1, 0]), &t).unwrap();
    assert!(id.ker_a.is_zero());
    assert!(id.ker_b_adjoint.equals(&Subspace::column_space(&col(&[0, 1]), &t), &t).unwrap());
    assert!(!id.kernels_equal && !id.doubly_extremal && id.equivalence_holds());

    let zero = kernel_equality_check(&HermitianMatrix::<Q>::zeros(2), &Matrix::zeros(2, 3), &t).unwrap();
    assert_eq!((zero.ker_a.dim(), zero.ker_b_adjoint.dim()), (2, 2));
    assert!(zero.kernels_equal && zero.doubly_extremal);
}

#[test]
fn triple_omega_example() {
    let t = tol();
    let a = qh(&[&[2, 1], &[1, 1]]);
    let b = col::<Q>(&[1, 3]);
    assert_eq!(triple_omega(&a, &b, &t).unwrap(), omega(&a, &b, &t).unwrap());
}

fn rational_gen(seed: u64) -> Generator {
    Generator::new(GenConfig::new(seed, Backend::Rational).with_dims(1, 4))
}

fn float_gen(seed: u64) -> Generator {
    Generator::new(GenConfig::new(seed, Backend::Float).with_dims(1, 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimal_completions_are_extremal(seed in any::<u64>()) {
        let t = tol();
        let mut g = rational_gen(seed);
        let (n_x, n_y) = (g.dim(), g.dim());
        let rank_a = g.rng().int_in(0, n_x as i64) as usize;
        let (a, b) = g.positive_pair::<Q>(n_x, n_y, rank_a).unwrap();
        let ex = minimal_completion(&a, &b, &t).unwrap();
        let report = extremality_criteria(&ex, &t).unwrap();
        prop_assert!(report.is_extremal && report.criteria_agree());
        prop_assert!(shorted_operator(&ex, &t).unwrap().is_zero());
    }

    #[test]
    fn omega_is_an_involution_exactly(seed in any::<u64>()) {
        let t = tol();
        let mut g = rational_gen(seed);
        let (n_x, n_y) = (g.dim(), g.dim());
        let rank_a = g.rng().int_in(0, n_x as i64) as usize;
        let (a, b) = g.positive_pair::<Q>(n_x, n_y, rank_a).unwrap();
        prop_assert_eq!(triple_omega(&a, &b, &t).unwrap(), omega(&a, &b, &t).unwrap());
        prop_assert!(kernel_equality_check(&a, &b, &t).unwrap().equivalence_holds());
    }

    #[test]
    fn matching_ranges_are_doubly_extremal(seed in any::<u64>()) {
        let t = tol();
        let mut g = rational_gen(seed);
        let n = g.dim();
        let rank_a = g.rng().int_in(0, n as i64) as usize;
        let a = g.psd::<Q>(n, rank_a).unwrap();
        // B = A·U with U invertible has ran B = ran A.
        let u = g.full_rank_matrix::<Q>(n, n);
        let b = &*a * &u;
        prop_assert!(is_doubly_extremal(&a, &b, &t).unwrap());
        prop_assert_eq!(double_omega(&a, &b, &t).unwrap(), a);
    }

    #[test]
    fn float_routes_and_h1_agree(seed in any::<u64>()) {
        let t = tol();
        let mut g = float_gen(seed);
        let (n_x, n_y) = (g.dim(), g.dim());
        let rank_a = g.rng().int_in(0, n_x as i64) as usize;
        let (a, b) = g.positive_pair::<C>(n_x, n_y, rank_a).unwrap();
        let via_pinv = double_omega(&a, &b, &t).unwrap();
        let projected = double_omega_projection(&a, &b, &t).unwrap();
        prop_assert!(agree(&via_pinv, &projected, 1e-9));
        let h1 = h1_subspace(&a, &b, &t).unwrap();
        prop_assert_eq!(h1.is_zero(), is_doubly_extremal(&a, &b, &t).unwrap());
        prop_assert!(agree(&triple_omega(&a, &b, &t).unwrap(), &omega(&a, &b, &t).unwrap(), 1e-9));
    }
}
