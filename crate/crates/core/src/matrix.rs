//! Dense row-major matrices over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn column_vector(entries: Vec<S>) -> Self {
        let n = entries.len();
        Matrix {
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { S::zero() })
    }

    pub fn unit_vector(n: usize, k: usize) -> Self {
        Self::from_fn(n, 1, |i, _| if i == k { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<S> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn column(&self, j: usize) -> Self {
        self.submatrix(0, self.rows, j, j + 1)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[[a, b], [c, d]]` from four compatible blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diagonal(a: &Self, d: &Self) -> Self {
        Self::from_blocks(
            a,
            &Self::zeros(a.rows, d.cols),
            &Self::zeros(d.rows, a.cols),
            d,
        )
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// `u*·v` for column vectors, i.e. the pairing ⟨v, u⟩ of the kernel docs.
    pub fn inner(u: &Self, v: &Self) -> S {
        assert_eq!(u.shape(), v.shape());
        u.data
            .iter()
            .zip(&v.data)
            .fold(S::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
    }

    /// Hermitian form `x*·M·x`.
    pub fn quadratic_form(&self, x: &Self) -> S {
        Self::inner(x, &(self * x))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(S::modulus).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.modulus().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).modulus())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Hermitian part `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let half = S::one() / S::from_i64(2);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)].clone() + self[(j, i)].conj()) * half.clone()
        })
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        S::matmul(self, rhs)
    }
}

pub(crate) fn naive_product<S: Scalar>(lhs: &Matrix<S>, rhs: &Matrix<S>) -> Matrix<S> {
    let mut out = Matrix::zeros(lhs.rows, rhs.cols);
    for i in 0..lhs.rows {
        for k in 0..lhs.cols {
            let a = &lhs[(i, k)];
            if a.is_zero() {
                continue;
            }
            for j in 0..rhs.cols {
                let prod = a.clone() * rhs[(k, j)].clone();
                let slot: &mut S = &mut out[(i, j)];
                *slot = slot.clone() + prod;
            }
        }
    }
    out
}

impl<S: Scalar> Mul for Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Matrix<S>) -> Matrix<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), rhs.shape(), "sum of mismatched shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), rhs.shape(), "difference of mismatched shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(|v| -v.clone())
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian, GaussianRational};

    type Q = GaussianRational;

    fn sample() -> (Matrix<Q>, Matrix<Q>) {
        let m = Matrix::from_rows(vec![
            vec![gaussian((1, 2), (1, 1)), gaussian((-3, 1), (0, 1))],
            vec![gaussian((0, 1), (2, 3)), gaussian((5, 4), (-1, 2))],
            vec![gaussian((7, 1), (0, 1)), gaussian((1, 1), (1, 1))],
        ]);
        let n = Matrix::from_rows(vec![vec![gaussian((2, 1), (-1, 1)), gaussian((0, 1), (1, 5)), Q::one()]; 2]);
        (m, n)
    }

    #[test]
    fn adjoint_is_an_involution() {
        let (m, _) = sample();
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn adjoint_reverses_products() {
        let (m, n) = sample();
        assert_eq!((&m * &n).adjoint(), &n.adjoint() * &m.adjoint());
    }

    #[test]
    fn blocks_round_trip() {
        let (m, _) = sample();
        let big = Matrix::from_blocks(&m, &m, &m, &m);
        assert_eq!(big.submatrix(3, 6, 2, 4), m);
        assert_eq!(Matrix::block_diagonal(&m, &m).submatrix(0, 3, 2, 4), Matrix::zeros(3, 2));
    }

    #[test]
    fn mismatched_entry_count_is_rejected() {
        assert!(Matrix::<Q>::new(2, 2, vec![Q::one(); 3]).is_err());
    }
}
