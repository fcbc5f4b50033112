//! Square roots `A = R*R` of PSD matrices and the factorization lemmas
//! built on them.
//!
//! Square roots need scalar square roots, so the constructors here are float
//! only and fail with [`Error::ExactSquareRoot`] on the exact backend. Operations
//! that merely *consume* a factor (applying the generalized inverse of `R*`,
//! membership in `ran R*`, range additivity with a stacked factor) are generic.

use crate::error::{Error, Result};
use crate::generators::{random_unitary, Rng};
use crate::kernel::{
    agree, is_psd, kernel_basis, loewner_leq, pseudo_inverse, range_inclusion, rank, spectral_norm,
    HermitianMatrix, Subspace, ToleranceProfile,
};
use crate::matrix::Matrix;
use crate::scalar::{Complex64, Scalar};

/// Relative agreement used to accept `R*R = A` for computed float factors.
pub const FACTOR_AGREEMENT: f64 = 1e-9;

/// `R` (h×n) with `A = R*R`. `minimal` iff `rank R = h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareRootFactor<S> {
    pub r: Matrix<S>,
    pub minimal: bool,
}

impl<S: Scalar> SquareRootFactor<S> {
    /// Wrap an arbitrary factor, recording whether it is minimal.
    pub fn from_factor(r: Matrix<S>, tol: &ToleranceProfile) -> Self {
        let minimal = rank(&r, tol) == r.rows();
        SquareRootFactor { r, minimal }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.r.rows()
    }

    pub fn domain_dim(&self) -> usize {
        self.r.cols()
    }

    /// `R*·R`.
    pub fn gram(&self) -> HermitianMatrix<S> {
        HermitianMatrix::gram(&self.r)
    }

    pub fn adjoint(&self) -> Matrix<S> {
        self.r.adjoint()
    }
}

fn require_psd<S: Scalar>(a: &HermitianMatrix<S>, tol: &ToleranceProfile) -> Result<()> {
    if S::is_exact() {
        return Err(Error::ExactSquareRoot);
    }
    if !is_psd(a, tol) {
        return Err(Error::NotNonNegative);
    }
    Ok(())
}

/// Minimal square root from the Hermitian eigendecomposition:
/// `R = Λ₊^{1/2} V₊*` over the eigenpairs above the rank threshold.
pub fn minimal_square_root<S: Scalar>(a: &HermitianMatrix<S>, tol: &ToleranceProfile) -> Result<SquareRootFactor<S>> {
    require_psd(a, tol)?;
    let n = a.dim();
    let (values, vectors) = S::hermitian_eigen(a).ok_or(Error::ExactSquareRoot)?;
    let top = values.iter().cloned().fold(0.0, f64::max);
    let kept: Vec<usize> = (0..n)
        .filter(|&k| top > 0.0 && values[k] > tol.rank_rel_threshold * top)
        .collect();
    let mut r = Matrix::zeros(kept.len(), n);
    for (row, &k) in kept.iter().enumerate() {
        let s = S::sqrt_real(values[k]).ok_or(Error::ExactSquareRoot)?;
        for j in 0..n {
            r[(row, j)] = s.clone() * vectors[(j, k)].conj();
        }
    }
    Ok(SquareRootFactor { r, minimal: true })
}

/// Minimal square root from Cholesky with diagonal pivoting.
///
/// Stops once the largest remaining diagonal falls to the rank threshold
/// relative to the largest initial diagonal. Rows are upper trapezoidal in
/// the pivoted order.
pub fn cholesky_square_root<S: Scalar>(a: &HermitianMatrix<S>, tol: &ToleranceProfile) -> Result<SquareRootFactor<S>> {
    require_psd(a, tol)?;
    let n = a.dim();
    let mut work = a.matrix().clone();
    let top = (0..n).map(|i| work[(i, i)].re_f64()).fold(0.0, f64::max);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut rows: Vec<Vec<S>> = Vec::new();
    while !remaining.is_empty() {
        let (pos, &p) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &i), (_, &j)| work[(i, i)].re_f64().total_cmp(&work[(j, j)].re_f64()))
            .expect("nonempty");
        let d = work[(p, p)].re_f64();
        if top == 0.0 || d <= tol.rank_rel_threshold * top {
            break;
        }
        remaining.remove(pos);
        let s = S::sqrt_real(d).ok_or(Error::ExactSquareRoot)?;
        let mut row = vec![S::zero(); n];
        row[p] = s.clone();
        for &j in &remaining {
            row[j] = work[(p, j)].clone() / s.clone();
        }
        for &i in &remaining {
            for &j in &remaining {
                let delta = row[i].conj() * row[j].clone();
                work[(i, j)] = work[(i, j)].clone() - delta;
            }
        }
        rows.push(row);
    }
    let r = if rows.is_empty() {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(rows)
    };
    Ok(SquareRootFactor { r, minimal: true })
}

/// A non-minimal square root: the minimal one padded with `pad` zero rows
/// and mixed by a random unitary drawn from `rng`.
pub fn nonminimal_square_root(
    a: &HermitianMatrix<Complex64>,
    pad: usize,
    rng: &mut Rng,
    tol: &ToleranceProfile,
) -> Result<SquareRootFactor<Complex64>> {
    let minimal = minimal_square_root(a, tol)?;
    let h = minimal.hilbert_dim() + pad;
    let padded = minimal.r.vstack(&Matrix::zeros(pad, a.dim()));
    let mixed = &random_unitary(h, rng) * &padded;
    Ok(SquareRootFactor {
        r: mixed,
        minimal: pad == 0,
    })
}

/// The unique `h ∈ ran R` with `R*h = x′`, i.e. `R*⁺·x′`.
pub fn generalized_inverse_apply<S: Scalar>(
    rf: &SquareRootFactor<S>,
    xprime: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<Matrix<S>> {
    let r_adj = rf.adjoint();
    if !range_inclusion(xprime, &r_adj, tol)? {
        return Err(Error::OutsideRange);
    }
    Ok(&pseudo_inverse(&r_adj, tol) * xprime)
}

/// The two membership conditions for `x′ ∈ ran R*`, evaluated independently.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipCertificate<S> {
    /// `⟨x′, x⟩ = 0` for every `x ∈ ker R`.
    pub annihilates_kernel: bool,
    /// `sup_x |⟨x′,x⟩|²/‖Rx‖² < ∞`, decided by solving `R*h = x′`.
    pub sup_finite: bool,
    /// `‖R*⁺x′‖²` when the supremum is finite.
    pub sup: Option<S>,
}

impl<S> MembershipCertificate<S> {
    pub fn is_member(&self) -> bool {
        self.annihilates_kernel && self.sup_finite
    }
}

pub fn membership_ran_rstar<S: Scalar>(
    rf: &SquareRootFactor<S>,
    xprime: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<MembershipCertificate<S>> {
    if xprime.rows() != rf.domain_dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against a factor on {} coordinates",
            xprime.rows(),
            rf.domain_dim()
        )));
    }
    let scale = 1.0 + xprime.max_abs();
    let kernel = kernel_basis(&rf.r, tol);
    let pairings = &kernel.adjoint() * xprime;
    let annihilates_kernel = if S::is_exact() {
        pairings.is_zero()
    } else {
        pairings.max_abs() <= FACTOR_AGREEMENT * scale
    };

    let r_adj = rf.adjoint();
    let h = &pseudo_inverse(&r_adj, tol) * xprime;
    let sup_finite = agree(&(&r_adj * &h), xprime, FACTOR_AGREEMENT);
    let sup = sup_finite.then(|| Matrix::inner(&h, &h).re());
    Ok(MembershipCertificate {
        annihilates_kernel,
        sup_finite,
        sup,
    })
}

/// `R_A* = R_D*·W` with `‖W‖ ≤ α`.
#[derive(Clone, Debug)]
pub struct DouglasFactorization<S> {
    pub w: Matrix<S>,
    pub alpha: f64,
    pub op_norm_w: f64,
    pub root_a: SquareRootFactor<S>,
    pub root_d: SquareRootFactor<S>,
}

fn alpha_squared<S: Scalar>(alpha: f64) -> Result<S> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be a nonnegative real, got {alpha}")));
    }
    Ok(S::from_f64(alpha * alpha))
}

/// Douglas-type factorization through minimal square roots; `W = R_D*⁺·R_A*`.
pub fn douglas_factorization<S: Scalar>(
    a: &HermitianMatrix<S>,
    d: &HermitianMatrix<S>,
    alpha: f64,
    tol: &ToleranceProfile,
) -> Result<DouglasFactorization<S>> {
    if a.dim() != d.dim() {
        return Err(Error::DimensionMismatch(format!("A is {0}x{0}, D is {1}x{1}", a.dim(), d.dim())));
    }
    let bound = d.scale_real(&alpha_squared::<S>(alpha)?);
    if !loewner_leq(a, &bound, tol)? {
        return Err(Error::OrderViolated);
    }
    let root_a = minimal_square_root(a, tol)?;
    let root_d = minimal_square_root(d, tol)?;
    let w = &pseudo_inverse(&root_d.adjoint(), tol) * &root_a.adjoint();
    let op_norm_w = spectral_norm(&w);
    Ok(DouglasFactorization {
        w,
        alpha,
        op_norm_w,
        root_a,
        root_d,
    })
}

/// The same `W` from the normal equations `R_D R_D* W = R_D R_A*`, solvable
/// because a minimal `R_D` has full row rank.
pub fn douglas_factor_normal_equations<S: Scalar>(
    root_a: &SquareRootFactor<S>,
    root_d: &SquareRootFactor<S>,
) -> Result<Matrix<S>> {
    let gram = &root_d.r * &root_d.adjoint();
    let inv = crate::kernel::inverse(&gram)
        .ok_or_else(|| Error::InvalidArgument("normal equations need a minimal factor of D".into()))?;
    Ok(&(&inv * &root_d.r) * &root_a.adjoint())
}

/// The isometry `U: H_S → H_R` with `U·S = R`, for `S` minimal: `U = R·S⁺`.
pub fn linking_isometry<S: Scalar>(
    rf: &SquareRootFactor<S>,
    sf: &SquareRootFactor<S>,
    tol: &ToleranceProfile,
) -> Result<Matrix<S>> {
    if S::is_exact() {
        return Err(Error::ExactSquareRoot);
    }
    if !sf.minimal {
        return Err(Error::InvalidArgument("the second factor must be minimal".into()));
    }
    if rf.domain_dim() != sf.domain_dim() || !agree(&rf.gram(), &sf.gram(), FACTOR_AGREEMENT) {
        return Err(Error::FactorMismatch("R*R differs from S*S".into()));
    }
    Ok(&rf.r * &pseudo_inverse(&sf.r, tol))
}

#[derive(Clone, Debug)]
pub struct RangeAdditivityReport<S> {
    /// `ran R₁* + ran R₂*`.
    pub summed: Subspace<S>,
    /// `ran R*` for the stacked factor `R = [R₁; R₂]`.
    pub stacked_root_range: Subspace<S>,
    /// `ran R*` for a minimal factor of `A` (float only).
    pub minimal_root_range: Option<Subspace<S>>,
    pub holds: bool,
}

/// Range additivity for `A = R₁*R₁ + R₂*R₂`.
///
/// `[R₁; R₂]` is itself a square root of `A`, which keeps the check exact on
/// the rational backend; on float a minimal root is compared as well.
pub fn verify_range_additivity<S: Scalar>(
    r1: &Matrix<S>,
    r2: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<RangeAdditivityReport<S>> {
    if r1.cols() != r2.cols() {
        return Err(Error::DimensionMismatch(format!(
            "factors act on {} and {} coordinates",
            r1.cols(),
            r2.cols()
        )));
    }
    let summed = Subspace::column_space(&r1.adjoint(), tol).sum(&Subspace::column_space(&r2.adjoint(), tol), tol)?;
    let stacked = r1.vstack(r2);
    let stacked_root_range = Subspace::column_space(&stacked.adjoint(), tol);
    let mut holds = summed.equals(&stacked_root_range, tol)?;
    let minimal_root_range = if S::is_exact() {
        None
    } else {
        let a = HermitianMatrix::gram(&stacked);
        let root = minimal_square_root(&a, tol)?;
        let range = Subspace::column_space(&root.adjoint(), tol);
        holds &= summed.equals(&range, tol)?;
        Some(range)
    };
    Ok(RangeAdditivityReport {
        summed,
        stacked_root_range,
        minimal_root_range,
        holds,
    })
}

#[cfg(test)]
mod tests;
