use std::ops::Deref;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A square matrix equal to its conjugate transpose.
///
/// Exact on the rational backend. Float inputs within the input slack are
/// replaced by their Hermitian part.
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianMatrix<S>(Matrix<S>);

impl<S: Scalar> HermitianMatrix<S> {
    pub fn new(m: Matrix<S>) -> Result<Self> {
        S::hermitize(m).map(HermitianMatrix).ok_or(Error::NotHermitian)
    }

    /// `(M + M*)/2`; for computed quantities that are Hermitian in exact
    /// arithmetic. Leaves exact Hermitian input unchanged.
    pub fn hermitian_part(m: &Matrix<S>) -> Self {
        HermitianMatrix(m.hermitian_part())
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(Matrix::identity(n))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(Matrix::from_i64_rows(rows))
    }

    /// `G*·G`.
    pub fn gram(g: &Matrix<S>) -> Self {
        Self::hermitian_part(&(&g.adjoint() * g))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianMatrix(&self.0 - &other.0)
    }

    /// Real multiple.
    pub fn scale_real(&self, s: &S) -> Self {
        Self::hermitian_part(&self.0.scale(&s.re()))
    }

    /// `A*·H·A`.
    pub fn congruence(&self, a: &Matrix<S>) -> Self {
        Self::hermitian_part(&(&(&a.adjoint() * &self.0) * a))
    }
}

impl<S> Deref for HermitianMatrix<S> {
    type Target = Matrix<S>;
    fn deref(&self) -> &Matrix<S> {
        &self.0
    }
}
