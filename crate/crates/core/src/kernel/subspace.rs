use crate::error::{Error, Result};
use crate::kernel::linalg::{inverse, kernel_basis, range_inclusion, rank_factorization, rank_factorization_scaled};
use crate::kernel::tolerance::ToleranceProfile;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A linear subspace of `S^n`, held as a basis with independent columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Matrix<S>,
}

impl<S: Scalar> Subspace<S> {
    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix<S>, tol: &ToleranceProfile) -> Self {
        Subspace {
            ambient_dim: m.rows(),
            basis: rank_factorization(m, tol).0,
        }
    }

    /// Span of the columns of a computed `m`, with the float rank threshold
    /// measured against `scale` as well (see [`rank_factorization_scaled`]).
    pub fn column_space_scaled(m: &Matrix<S>, scale: f64, tol: &ToleranceProfile) -> Self {
        Subspace {
            ambient_dim: m.rows(),
            basis: rank_factorization_scaled(m, scale, tol).0,
        }
    }

    pub fn kernel(m: &Matrix<S>, tol: &ToleranceProfile) -> Self {
        Subspace {
            ambient_dim: m.cols(),
            basis: kernel_basis(m, tol),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::identity(n),
        }
    }

    /// Coordinates `offset..offset+len` of `S^n`, others zero.
    pub fn coordinate(n: usize, offset: usize, len: usize) -> Self {
        assert!(offset + len <= n);
        Subspace {
            ambient_dim: n,
            basis: Matrix::from_fn(n, len, |i, j| if i == offset + j { S::one() } else { S::zero() }),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self, tol: &ToleranceProfile) -> Result<bool> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(true);
        }
        range_inclusion(&other.basis, &self.basis, tol)
    }

    pub fn contains_vector(&self, v: &Matrix<S>, tol: &ToleranceProfile) -> Result<bool> {
        range_inclusion(v, &self.basis, tol)
    }

    /// Mutual inclusion.
    pub fn equals(&self, other: &Self, tol: &ToleranceProfile) -> Result<bool> {
        Ok(self.contains(other, tol)? && other.contains(self, tol)?)
    }

    pub fn sum(&self, other: &Self, tol: &ToleranceProfile) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::column_space(&self.basis.hstack(&other.basis), tol))
    }

    /// Pairs `(a, b)` with `B₁a = B₂b` give the intersection as `B₁a`.
    pub fn intersect(&self, other: &Self, tol: &ToleranceProfile) -> Result<Self> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient_dim));
        }
        let stacked = self.basis.hstack(&(-&other.basis));
        let k = kernel_basis(&stacked, tol);
        let coeffs = k.submatrix(0, self.dim(), 0, k.cols());
        Ok(Self::column_space(&(&self.basis * &coeffs), tol))
    }

    pub fn orthogonal_complement(&self, tol: &ToleranceProfile) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient_dim);
        }
        Self::kernel(&self.basis.adjoint(), tol)
    }

    /// `P = B(B*B)⁻¹B*`: Hermitian, idempotent, `ran P = self`.
    pub fn orthoprojector(&self) -> Matrix<S> {
        if self.is_zero() {
            return Matrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        let b_adj = self.basis.adjoint();
        let gram_inv = inverse(&(&b_adj * &self.basis)).expect("basis columns are independent");
        &(&self.basis * &gram_inv) * &b_adj
    }
}

/// Orthogonal projector onto the span of `s`.
pub fn orthoprojector<S: Scalar>(s: &Subspace<S>) -> Matrix<S> {
    s.orthoprojector()
}
