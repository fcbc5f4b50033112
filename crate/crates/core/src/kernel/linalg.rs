//! Backend-generic rank, pseudo-inverse, range and order primitives.

use crate::error::{Error, Result};
use crate::kernel::float;
use crate::kernel::hermitian::HermitianMatrix;
use crate::kernel::tolerance::ToleranceProfile;
use crate::matrix::Matrix;
use crate::scalar::{Complex64, Scalar};

/// `M = F·G` with `F` of full column rank `r = rank M` and `ran F = ran M`.
///
/// On the float backend `F` has orthonormal columns.
pub fn rank_factorization<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> (Matrix<S>, Matrix<S>) {
    S::rank_factorization(m, 0.0, tol)
}

/// Rank factorization of a computed matrix whose entries may vanish in exact
/// arithmetic: on float the rank threshold is taken relative to
/// `max(σ_max, scale)` instead of `σ_max` alone.
pub fn rank_factorization_scaled<S: Scalar>(m: &Matrix<S>, scale: f64, tol: &ToleranceProfile) -> (Matrix<S>, Matrix<S>) {
    S::rank_factorization(m, scale, tol)
}

pub fn rank<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> usize {
    rank_factorization(m, tol).0.cols()
}

pub fn rank_scaled<S: Scalar>(m: &Matrix<S>, scale: f64, tol: &ToleranceProfile) -> usize {
    rank_factorization_scaled(m, scale, tol).0.cols()
}

/// Moore–Penrose inverse.
pub fn pseudo_inverse<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> Matrix<S> {
    S::pseudo_inverse(m, 0.0, tol)
}

pub fn pseudo_inverse_scaled<S: Scalar>(m: &Matrix<S>, scale: f64, tol: &ToleranceProfile) -> Matrix<S> {
    S::pseudo_inverse(m, scale, tol)
}

/// Inverse of a square matrix. `None` if singular.
pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Option<Matrix<S>> {
    S::inverse(m)
}

/// Gauss–Jordan inverse with modulus pivoting.
pub(crate) fn gauss_jordan_inverse<S: Scalar>(m: &Matrix<S>) -> Option<Matrix<S>> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::<S>::identity(n);
    for c in 0..n {
        let p = (c..n)
            .filter(|&i| !a[(i, c)].is_zero())
            .max_by(|&i, &j| a[(i, c)].modulus().total_cmp(&a[(j, c)].modulus()))?;
        if p != c {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = t;
                let t = inv[(p, j)].clone();
                inv[(p, j)] = inv[(c, j)].clone();
                inv[(c, j)] = t;
            }
        }
        let d = S::one() / a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = a[(c, j)].clone() * d.clone();
            inv[(c, j)] = inv[(c, j)].clone() * d.clone();
        }
        for i in 0..n {
            if i == c || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..n {
                let da = f.clone() * a[(c, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - da;
                let di = f.clone() * inv[(c, j)].clone();
                inv[(i, j)] = inv[(i, j)].clone() - di;
            }
        }
    }
    Some(inv)
}

/// `ran M ⊆ ran N`, decided by `rank N = rank [N | M]`.
pub fn range_inclusion<S: Scalar>(m: &Matrix<S>, n: &Matrix<S>, tol: &ToleranceProfile) -> Result<bool> {
    range_inclusion_scaled(m, n, 0.0, tol)
}

/// [`range_inclusion`] with the float rank threshold measured against `scale` too.
pub fn range_inclusion_scaled<S: Scalar>(m: &Matrix<S>, n: &Matrix<S>, scale: f64, tol: &ToleranceProfile) -> Result<bool> {
    if m.rows() != n.rows() {
        return Err(Error::DimensionMismatch(format!(
            "range inclusion between {} and {} rows",
            m.rows(),
            n.rows()
        )));
    }
    Ok(rank_scaled(n, scale, tol) == rank_scaled(&n.hstack(m), scale, tol))
}

/// Columns spanning `ker M`, taken as the range of the projector `I - M⁺M`,
/// whose nonzero singular values are all 1.
pub fn kernel_basis<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> Matrix<S> {
    S::kernel_basis(m, tol)
}

pub(crate) fn kernel_basis_by_projector<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> Matrix<S> {
    let n = m.cols();
    let proj = &Matrix::identity(n) - &(&pseudo_inverse(m, tol) * m);
    rank_factorization_scaled(&proj, 1.0, tol).0
}

pub fn is_psd<S: Scalar>(h: &HermitianMatrix<S>, tol: &ToleranceProfile) -> bool {
    S::is_psd_scaled(h, 0.0, tol)
}

/// PSD test with the float slack measured against `scale` as well as the
/// matrix's own spectrum. Used where the matrix is a computed quantity that
/// may vanish in exact arithmetic.
pub fn is_psd_relative<S: Scalar>(h: &HermitianMatrix<S>, scale: f64, tol: &ToleranceProfile) -> bool {
    S::is_psd_scaled(h, scale, tol)
}

/// `H1 ≤ H2` in the Loewner order.
pub fn loewner_leq<S: Scalar>(
    h1: &HermitianMatrix<S>,
    h2: &HermitianMatrix<S>,
    tol: &ToleranceProfile,
) -> Result<bool> {
    loewner_leq_scaled(h1, h2, 0.0, tol)
}

/// [`loewner_leq`] with the float slack also measured against `scale`, for
/// operands computed from matrices of that size.
pub fn loewner_leq_scaled<S: Scalar>(
    h1: &HermitianMatrix<S>,
    h2: &HermitianMatrix<S>,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<bool> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Loewner comparison of {0}x{0} and {1}x{1}",
            h1.dim(),
            h2.dim()
        )));
    }
    let diff = HermitianMatrix::hermitian_part(&(h2.matrix() - h1.matrix()));
    let scale = h1.frobenius_norm().max(h2.frobenius_norm()).max(scale);
    Ok(is_psd_relative(&diff, scale, tol))
}

/// Equality on the exact backend; on float,
/// `max|a - b| <= rel * (1 + max(max|a|, max|b|))`.
pub fn agree<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, rel: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    if S::is_exact() {
        return a == b;
    }
    a.max_abs_diff(b) <= rel * (1.0 + a.max_abs().max(b.max_abs()))
}

pub fn to_complex64<S: Scalar>(m: &Matrix<S>) -> Matrix<Complex64> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        Complex64::new(m[(i, j)].re_f64(), m[(i, j)].im_f64())
    })
}

/// Largest singular value, evaluated in binary64 on both backends.
pub fn spectral_norm<S: Scalar>(m: &Matrix<S>) -> f64 {
    float::spectral_norm(&to_complex64(m))
}

/// Smallest eigenvalue of a Hermitian matrix, in binary64.
pub fn min_eigenvalue<S: Scalar>(h: &HermitianMatrix<S>) -> f64 {
    let (values, _) = float::hermitian_eigen(&to_complex64(h).hermitian_part());
    values.first().copied().unwrap_or(0.0)
}
