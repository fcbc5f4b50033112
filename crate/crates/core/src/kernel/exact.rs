//! Exact backend hooks: elimination over ℚ(i). No scalar square roots.

use std::cmp::Ordering;

use num::integer::Integer;
use num::{BigInt, BigRational, Complex};

use crate::matrix::Matrix;
use crate::scalar::{rational_sign, GaussianRational as Q, Scalar};

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix<Q>) -> (Matrix<Q>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = <Q as Scalar>::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                let delta = factor.clone() * a[(r, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// `F` = pivot columns of `M`, `G` = nonzero rows of its RREF.
pub fn rank_factorization(m: &Matrix<Q>) -> (Matrix<Q>, Matrix<Q>) {
    let (reduced, pivots) = rref(m);
    let f = m.select_columns(&pivots);
    let g = reduced.submatrix(0, pivots.len(), 0, m.cols());
    (f, g)
}

/// Basis of `ker M` read off the RREF, one vector per free column.
pub fn null_space(m: &Matrix<Q>) -> Matrix<Q> {
    let (reduced, pivots) = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Matrix::from_fn(n, free.len(), |i, k| {
        if i == free[k] {
            <Q as Scalar>::one()
        } else if let Some(row) = pivots.iter().position(|&p| p == i) {
            -reduced[(row, free[k])].clone()
        } else {
            <Q as Scalar>::zero()
        }
    })
}

type Zi = Complex<BigInt>;

/// Gaussian-integer entries `N` (row-major) and `L > 0` with `M = N/L`.
fn clear_denominators(m: &Matrix<Q>) -> (Vec<Zi>, BigInt) {
    let l = m
        .entries()
        .iter()
        .fold(<BigInt as num::One>::one(), |acc, v| acc.lcm(v.re.denom()).lcm(v.im.denom()));
    let scale = |r: &BigRational| r.numer() * (&l / r.denom());
    let ints = m.entries().iter().map(|v| Complex::new(scale(&v.re), scale(&v.im))).collect();
    (ints, l)
}

/// `z / d` as a Gaussian rational, reduced once per part.
fn quotient(z: &Zi, d: &Zi) -> Q {
    let norm = &d.re * &d.re + &d.im * &d.im;
    let num = z * d.conj();
    Complex::new(BigRational::new(num.re, norm.clone()), BigRational::new(num.im, norm))
}

/// Division known to be exact in ℤ[i].
fn exact_div(z: &Zi, d: &Zi) -> Zi {
    let norm = &d.re * &d.re + &d.im * &d.im;
    let num = z * d.conj();
    debug_assert!(num::Zero::is_zero(&(&num.re % &norm)) && num::Zero::is_zero(&(&num.im % &norm)));
    Complex::new(num.re / &norm, num.im / norm)
}

/// Product over ℤ[i] after clearing denominators, so each output entry
/// is reduced once instead of after every multiply-add.
pub fn matmul(a: &Matrix<Q>, b: &Matrix<Q>) -> Matrix<Q> {
    let (na, la) = clear_denominators(a);
    let (nb, lb) = clear_denominators(b);
    let den = Complex::new(la * lb, BigInt::from(0));
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    Matrix::from_fn(n, m, |i, j| {
        let mut acc = <Zi as num::Zero>::zero();
        for t in 0..k {
            let x = &na[i * k + t];
            if !num::Zero::is_zero(x) {
                acc += x * &nb[t * m + j];
            }
        }
        quotient(&acc, &den)
    })
}

/// Fraction-free Gauss–Jordan on `[N | I]`. Every intermediate entry is a
/// minor of the augmented matrix, so the divisions by the previous pivot are
/// exact, and at the end the left block is `d·I` with `d = ±det N`.
pub fn inverse(m: &Matrix<Q>) -> Option<Matrix<Q>> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let (ints, l) = clear_denominators(m);
    let mut a: Vec<Vec<Zi>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| match j {
                    j if j < n => ints[i * n + j].clone(),
                    j if j - n == i => <Zi as num::One>::one(),
                    _ => <Zi as num::Zero>::zero(),
                })
                .collect()
        })
        .collect();
    let mut prev = <Zi as num::One>::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !num::Zero::is_zero(&a[i][k]))?;
        a.swap(p, k);
        let pivot = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..2 * n {
                let v = &pivot * &a[i][j] - &f * &a[k][j];
                a[i][j] = exact_div(&v, &prev);
            }
        }
        prev = pivot;
    }
    let l = Complex::new(l, BigInt::from(0));
    Some(Matrix::from_fn(n, n, |i, j| quotient(&(&a[i][n + j] * &l), &a[i][i])))
}

/// `M⁺ = G*(GG*)⁻¹(F*F)⁻¹F*` from a full-rank factorization `M = FG`.
pub fn pseudo_inverse(m: &Matrix<Q>) -> Matrix<Q> {
    let (f, g) = rank_factorization(m);
    if f.cols() == 0 {
        return Matrix::zeros(m.cols(), m.rows());
    }
    let g_adj = g.adjoint();
    let f_adj = f.adjoint();
    let gg = inverse(&(&g * &g_adj)).expect("G has full row rank");
    let ff = inverse(&(&f_adj * &f)).expect("F has full column rank");
    &(&(&g_adj * &gg) * &ff) * &f_adj
}

/// LDL* with symmetric diagonal pivoting on a Hermitian matrix.
///
/// PSD iff every pivot is nonnegative and, once only zero diagonals remain,
/// the remaining block vanishes identically.
pub fn is_psd(h: &Matrix<Q>) -> bool {
    let mut a = h.clone();
    let mut active: Vec<usize> = (0..a.rows()).collect();
    loop {
        let mut pivot = None;
        for &i in &active {
            match rational_sign(&a[(i, i)]) {
                Ordering::Less => return false,
                Ordering::Greater if pivot.is_none() => pivot = Some(i),
                _ => {}
            }
        }
        let Some(p) = pivot else {
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a[(i, j)].is_zero()));
        };
        active.retain(|&i| i != p);
        let d = a[(p, p)].clone();
        for &i in &active {
            let lip = a[(i, p)].clone() / d.clone();
            if lip.is_zero() {
                continue;
            }
            for &j in &active {
                let delta = lip.clone() * a[(p, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - delta;
            }
        }
    }
}
