//! Scalar fields: complex binary64 and exact Gaussian rationals.
//!
//! Both fields implement [`Scalar`], which carries the plain field
//! arithmetic plus the handful of backend-specific linear-algebra hooks
//! (rank revelation, pseudo-inverse, positivity) that cannot be written
//! once for both. Everything above the numeric kernel is generic over it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, Complex};

use crate::generators::Rng;
use crate::kernel::{exact, float, ToleranceProfile};
use crate::matrix::Matrix;

pub type Complex64 = Complex<f64>;
pub type GaussianRational = Complex<BigRational>;

/// Which arithmetic a scalar type uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Float,
    Rational,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Rational => "rational",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" => Ok(Backend::Float),
            "rational" => Ok(Backend::Rational),
            other => Err(format!("unknown backend {other:?} (expected float or rational)")),
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Real scalar from a binary64 value. Exact on both backends.
    fn from_f64(v: f64) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test (no tolerance).
    fn is_zero(&self) -> bool;
    fn re(&self) -> Self;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    /// Modulus, approximated in binary64 on the exact backend.
    fn modulus(&self) -> f64;
    /// Draw an entry for generated instances.
    fn sample(rng: &mut Rng, bound: i64) -> Self;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }

    // Backend hooks used by the numeric kernel.

    /// Returns `(F, G)` with `M = F·G` and `F` of full column rank.
    /// Singular values at or below `tol.rank_rel_threshold · max(σ_max, scale)`
    /// count as zero on the float backend.
    fn rank_factorization(m: &Matrix<Self>, scale: f64, tol: &ToleranceProfile) -> (Matrix<Self>, Matrix<Self>);
    fn pseudo_inverse(m: &Matrix<Self>, scale: f64, tol: &ToleranceProfile) -> Matrix<Self>;
    /// PSD test of a Hermitian matrix. `scale` is an external magnitude the
    /// float slack is measured against in addition to the matrix itself.
    fn is_psd_scaled(h: &Matrix<Self>, scale: f64, tol: &ToleranceProfile) -> bool;
    /// Validate (and on float, symmetrize) a matrix claimed Hermitian.
    fn hermitize(m: Matrix<Self>) -> Option<Matrix<Self>>;
    /// Hermitian eigendecomposition `H = V·diag(λ)·V*`; `None` on the exact backend.
    fn hermitian_eigen(h: &Matrix<Self>) -> Option<(Vec<f64>, Matrix<Self>)>;
    fn sqrt_real(v: f64) -> Option<Self>;
    fn matmul(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        crate::matrix::naive_product(a, b)
    }
    /// `None` if singular.
    fn inverse(m: &Matrix<Self>) -> Option<Matrix<Self>> {
        crate::kernel::linalg::gauss_jordan_inverse(m)
    }
    /// Columns spanning `ker M`.
    fn kernel_basis(m: &Matrix<Self>, tol: &ToleranceProfile) -> Matrix<Self> {
        crate::kernel::linalg::kernel_basis_by_projector(m, tol)
    }
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex::new(v, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn re(&self) -> Self {
        Complex::new(self.re, 0.0)
    }
    fn re_f64(&self) -> f64 {
        self.re
    }
    fn im_f64(&self) -> f64 {
        self.im
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn sample(rng: &mut Rng, _bound: i64) -> Self {
        Complex::new(rng.uniform_signed(), rng.uniform_signed())
    }

    fn rank_factorization(m: &Matrix<Self>, scale: f64, tol: &ToleranceProfile) -> (Matrix<Self>, Matrix<Self>) {
        float::rank_factorization(m, scale, tol)
    }
    fn pseudo_inverse(m: &Matrix<Self>, scale: f64, tol: &ToleranceProfile) -> Matrix<Self> {
        float::pseudo_inverse(m, scale, tol)
    }
    fn is_psd_scaled(h: &Matrix<Self>, scale: f64, tol: &ToleranceProfile) -> bool {
        float::is_psd_scaled(h, scale, tol)
    }
    fn hermitize(m: Matrix<Self>) -> Option<Matrix<Self>> {
        float::hermitize(m)
    }
    fn hermitian_eigen(h: &Matrix<Self>) -> Option<(Vec<f64>, Matrix<Self>)> {
        Some(float::hermitian_eigen(h))
    }
    fn sqrt_real(v: f64) -> Option<Self> {
        Some(Complex::new(v.sqrt(), 0.0))
    }
}

impl Scalar for GaussianRational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_f64(v: f64) -> Self {
        let re = BigRational::from_float(v).expect("finite binary64 value");
        Complex::new(re, BigRational::zero())
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn re(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }
    fn re_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::NAN)
    }
    fn im_f64(&self) -> f64 {
        self.im.to_f64().unwrap_or(f64::NAN)
    }
    fn modulus(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }
    fn sample(rng: &mut Rng, bound: i64) -> Self {
        let part = |rng: &mut Rng| {
            let num = rng.int_in(-bound, bound);
            let den = rng.int_in(1, bound.max(1));
            BigRational::new(BigInt::from(num), BigInt::from(den))
        };
        let re = part(rng);
        let im = part(rng);
        Complex::new(re, im)
    }

    fn rank_factorization(m: &Matrix<Self>, _scale: f64, _tol: &ToleranceProfile) -> (Matrix<Self>, Matrix<Self>) {
        exact::rank_factorization(m)
    }
    fn pseudo_inverse(m: &Matrix<Self>, _scale: f64, _tol: &ToleranceProfile) -> Matrix<Self> {
        exact::pseudo_inverse(m)
    }
    fn is_psd_scaled(h: &Matrix<Self>, _scale: f64, _tol: &ToleranceProfile) -> bool {
        exact::is_psd(h)
    }
    fn hermitize(m: Matrix<Self>) -> Option<Matrix<Self>> {
        if m.rows() == m.cols() && m == m.adjoint() {
            Some(m)
        } else {
            None
        }
    }
    fn hermitian_eigen(_h: &Matrix<Self>) -> Option<(Vec<f64>, Matrix<Self>)> {
        None
    }
    fn sqrt_real(_v: f64) -> Option<Self> {
        None
    }
    fn matmul(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        exact::matmul(a, b)
    }
    fn inverse(m: &Matrix<Self>) -> Option<Matrix<Self>> {
        exact::inverse(m)
    }
    fn kernel_basis(m: &Matrix<Self>, _tol: &ToleranceProfile) -> Matrix<Self> {
        exact::null_space(m)
    }
}

/// Sign of the real part of an exact scalar.
pub(crate) fn rational_sign(s: &GaussianRational) -> std::cmp::Ordering {
    if s.re.is_zero() {
        std::cmp::Ordering::Equal
    } else if s.re.is_positive() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}

/// Build an exact scalar from `(re_num/re_den) + (im_num/im_den)·i`.
pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    Complex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

/// Real exact scalar `num/den`.
pub fn ratio(num: i64, den: i64) -> GaussianRational {
    gaussian((num, den), (0, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = gaussian((1, 3), (-2, 7));
        let b = gaussian((5, 11), (1, 13));
        assert_eq!((a.clone() + b.clone()) - b.clone(), a);
        assert_eq!((a.clone() * b.clone()) / b, a);
    }

    #[test]
    fn conjugation_is_an_involution() {
        let a = gaussian((1, 3), (-2, 7));
        assert_eq!(Scalar::conj(&Scalar::conj(&a)), a);
        let z = Complex64::new(0.25, -3.5);
        assert_eq!(Scalar::conj(&Scalar::conj(&z)), z);
    }

    #[test]
    fn from_f64_is_exact_on_rationals() {
        let q = GaussianRational::from_f64(0.1);
        assert_eq!(q.re_f64(), 0.1);
        assert_eq!(rational_sign(&q), std::cmp::Ordering::Greater);
    }
}
