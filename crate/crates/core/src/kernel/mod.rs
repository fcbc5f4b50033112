//! Numeric kernel: rank-revealing factorizations, pseudo-inverses,
//! subspaces, projectors and the Loewner order, on both scalar backends.

pub(crate) mod exact;
pub(crate) mod float;
mod hermitian;
pub(crate) mod linalg;
mod subspace;
mod tolerance;

pub use exact::rref;
pub use hermitian::HermitianMatrix;
pub use linalg::{
    agree, inverse, is_psd, is_psd_relative, kernel_basis, loewner_leq, loewner_leq_scaled, min_eigenvalue, pseudo_inverse,
    pseudo_inverse_scaled, range_inclusion, range_inclusion_scaled, rank, rank_factorization, rank_factorization_scaled, rank_scaled,
    spectral_norm, to_complex64,
};
pub use subspace::{orthoprojector, Subspace};
pub use tolerance::{ToleranceProfile, HERMITIAN_INPUT_SLACK};

pub use float::hermitian_eigen;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `is_psd` for a matrix that has not yet been validated as Hermitian.
pub fn is_psd_matrix<S: Scalar>(m: &Matrix<S>, tol: &ToleranceProfile) -> Result<bool> {
    let h = HermitianMatrix::new(m.clone()).map_err(|_| Error::NotHermitian)?;
    Ok(is_psd(&h, tol))
}
