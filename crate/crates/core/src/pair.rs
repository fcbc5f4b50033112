//! Positive pairs `(A, B)` and the operator `ω(A,B)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{
    is_psd_relative, kernel_basis, loewner_leq, pseudo_inverse, pseudo_inverse_scaled,
    range_inclusion_scaled, HermitianMatrix, ToleranceProfile,
};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::sqrt::{minimal_square_root, SquareRootFactor, FACTOR_AGREEMENT};

/// Which of the two positive-pair conditions hold.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDiagnostic {
    /// (i) `ker A ⊆ ker B*`.
    pub kernel_condition: bool,
    /// (ii) `sup_x |⟨By,x⟩|²/⟨Ax,x⟩ < ∞` for every `y`, i.e. `ran B ⊆ ran A`.
    pub sup_condition: bool,
    /// `⟨ω e_j, e_j⟩`, the supremum at each basis vector, when finite.
    pub sup_on_basis: Option<Vec<f64>>,
}

impl PairDiagnostic {
    pub fn holds(&self) -> bool {
        self.kernel_condition && self.sup_condition
    }
}

impl fmt::Display for PairDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return f.write_str("(i) and (ii) hold");
        }
        let mut parts = Vec::new();
        if !self.kernel_condition {
            parts.push("(i) fails: ker A is not contained in ker B*");
        }
        if !self.sup_condition {
            parts.push("(ii) fails: the supremum is unbounded");
        }
        f.write_str(&parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub positive: bool,
    pub diagnostic: PairDiagnostic,
}

fn check_shapes<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>) -> Result<()> {
    if a.dim() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {0}x{0} but B has {1} rows",
            a.dim(),
            b.rows()
        )));
    }
    Ok(())
}

/// Decide whether `(A, B)` is a positive pair.
///
/// The verdict is `ran B ⊆ ran A`; the diagnostic evaluates the kernel
/// condition separately so either failure can be reported.
pub fn check_positive_pair<S: Scalar>(
    a: &HermitianMatrix<S>,
    b: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<PairCheck> {
    check_positive_pair_scaled(a, b, 0.0, tol)
}

/// [`check_positive_pair`] for computed blocks: float thresholds are also
/// measured against `scale`, the size of the data they were derived from.
pub(crate) fn check_positive_pair_scaled<S: Scalar>(
    a: &HermitianMatrix<S>,
    b: &Matrix<S>,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<PairCheck> {
    check_shapes(a, b)?;
    if !is_psd_relative(a, scale, tol) {
        return Err(Error::PairBaseNotNonNegative);
    }
    let sup_condition = range_inclusion_scaled(b, a, scale, tol)?;
    let kernel = kernel_basis(a, tol);
    let leak = &b.adjoint() * &kernel;
    let kernel_condition = if S::is_exact() {
        leak.is_zero()
    } else {
        leak.max_abs() <= FACTOR_AGREEMENT * (1.0 + b.max_abs())
    };
    let sup_on_basis = sup_condition.then(|| {
        let omega = omega_pinv(a, b, scale, tol);
        (0..omega.dim()).map(|j| omega[(j, j)].re_f64()).collect()
    });
    Ok(PairCheck {
        positive: sup_condition,
        diagnostic: PairDiagnostic {
            kernel_condition,
            sup_condition,
            sup_on_basis,
        },
    })
}

/// How `ω(A,B)` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaRoute {
    /// `T = R*⁺B` from a minimal square root, `ω = T*T`. Float only.
    SquareRoot,
    /// `ω = B*A⁺B`. Works on both backends.
    PseudoInverse,
}

#[derive(Clone, Debug)]
pub struct PositivePair<S> {
    pub a: HermitianMatrix<S>,
    pub b: Matrix<S>,
    pub omega: HermitianMatrix<S>,
    /// `T` and the square root it was built from, on the square-root route.
    pub t: Option<Matrix<S>>,
    pub root: Option<SquareRootFactor<S>>,
    pub route: OmegaRoute,
}

fn omega_pinv<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, scale: f64, tol: &ToleranceProfile) -> HermitianMatrix<S> {
    HermitianMatrix::hermitian_part(&(&(&b.adjoint() * &pseudo_inverse_scaled(a, scale, tol)) * b))
}

/// `T = R*⁺B` and `ω = T*T` for any square root `R` of `A`.
pub fn omega_from_root<S: Scalar>(
    root: &SquareRootFactor<S>,
    b: &Matrix<S>,
    tol: &ToleranceProfile,
) -> (Matrix<S>, HermitianMatrix<S>) {
    let t = &pseudo_inverse(&root.adjoint(), tol) * b;
    let omega = HermitianMatrix::gram(&t);
    (t, omega)
}

pub fn build_pair<S: Scalar>(
    a: &HermitianMatrix<S>,
    b: &Matrix<S>,
    route: OmegaRoute,
    tol: &ToleranceProfile,
) -> Result<PositivePair<S>> {
    build_pair_scaled(a, b, route, 0.0, tol)
}

pub(crate) fn build_pair_scaled<S: Scalar>(
    a: &HermitianMatrix<S>,
    b: &Matrix<S>,
    route: OmegaRoute,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<PositivePair<S>> {
    let check = check_positive_pair_scaled(a, b, scale, tol)?;
    if !check.positive {
        return Err(Error::NotPositivePair(check.diagnostic));
    }
    let (omega, t, root) = match route {
        OmegaRoute::PseudoInverse => (omega_pinv(a, b, scale, tol), None, None),
        OmegaRoute::SquareRoot => {
            let root = minimal_square_root(a, tol)?;
            let (t, omega) = omega_from_root(&root, b, tol);
            (omega, Some(t), Some(root))
        }
    };
    Ok(PositivePair {
        a: a.clone(),
        b: b.clone(),
        omega,
        t,
        root,
        route,
    })
}

/// `ω(A,B)` via the pseudo-inverse route.
pub fn omega<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, tol: &ToleranceProfile) -> Result<HermitianMatrix<S>> {
    Ok(build_pair(a, b, OmegaRoute::PseudoInverse, tol)?.omega)
}

/// `|⟨By,x⟩|² / ⟨Ax,x⟩`, with contributions where `⟨Ax,x⟩ = 0` taken as 0.
pub fn pair_ratio<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, y: &Matrix<S>, x: &Matrix<S>) -> f64 {
    let denom = a.quadratic_form(x).re_f64();
    if denom <= 0.0 {
        return 0.0;
    }
    let num = Matrix::inner(x, &(b * y)).modulus().powi(2);
    num / denom
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupRatio<S> {
    /// `⟨ω y, y⟩`.
    pub value: S,
    /// `x★ = A⁺By`, attaining the supremum when `value > 0`.
    pub certificate: Matrix<S>,
}

pub fn sup_ratio<S: Scalar>(pair: &PositivePair<S>, y: &Matrix<S>, tol: &ToleranceProfile) -> Result<SupRatio<S>> {
    if y.shape() != (pair.b.cols(), 1) {
        return Err(Error::DimensionMismatch(format!(
            "y must be a column of length {}",
            pair.b.cols()
        )));
    }
    let value = pair.omega.quadratic_form(y).re();
    let certificate = if value.is_zero() || value.re_f64() <= 0.0 {
        Matrix::zeros(pair.a.dim(), 1)
    } else {
        &(&pseudo_inverse(&pair.a, tol) * &pair.b) * y
    };
    Ok(SupRatio { value, certificate })
}

#[derive(Clone, Debug)]
pub struct SubadditivityReport<S> {
    pub sum_is_positive_pair: bool,
    /// `ω(A₁+A₂, B₁+B₂)`.
    pub lhs: Option<HermitianMatrix<S>>,
    /// `ω(A₁,B₁) + ω(A₂,B₂)`.
    pub rhs: HermitianMatrix<S>,
    pub holds: bool,
}

pub fn omega_subadditivity_check<S: Scalar>(
    p1: &PositivePair<S>,
    p2: &PositivePair<S>,
    tol: &ToleranceProfile,
) -> Result<SubadditivityReport<S>> {
    if p1.a.dim() != p2.a.dim() || p1.b.shape() != p2.b.shape() {
        return Err(Error::DimensionMismatch("pairs of different shapes".into()));
    }
    let a = p1.a.add(&p2.a);
    let b = &p1.b + &p2.b;
    let rhs = p1.omega.add(&p2.omega);
    let check = check_positive_pair(&a, &b, tol)?;
    if !check.positive {
        return Ok(SubadditivityReport {
            sum_is_positive_pair: false,
            lhs: None,
            rhs,
            holds: false,
        });
    }
    let lhs = omega_pinv(&a, &b, 0.0, tol);
    let holds = loewner_leq(&lhs, &rhs, tol)?;
    Ok(SubadditivityReport {
        sum_is_positive_pair: true,
        lhs: Some(lhs),
        rhs,
        holds,
    })
}
