//! Reference computations that share no code path with the library routes
//! they are compared against.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::kernel::HermitianMatrix;
use crate::matrix::Matrix;
use crate::scalar::{rational_sign, Complex64, GaussianRational, Scalar};
use crate::schur::Block2;

type Q = GaussianRational;

/// Slack of the float eigenvalue oracle, relative to the spectral norm.
pub const EIGEN_SLACK: f64 = 1e-8;

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn eigenvalues(m: &Matrix<Complex64>) -> Vec<f64> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    let dm = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut values: Vec<f64> = SymmetricEigen::new(dm).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `λ_min ≥ −EIGEN_SLACK · max(‖M‖₂, scale)`.
pub fn psd_by_eigenvalues(m: &Matrix<Complex64>, scale: f64) -> bool {
    let values = eigenvalues(m);
    let norm = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    values.first().is_none_or(|&min| min >= -EIGEN_SLACK * norm.max(scale))
}

/// Determinant by elimination with the first nonzero pivot.
pub fn determinant(m: &Matrix<Q>) -> Q {
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            for j in 0..n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = tmp;
            }
            det = -det;
        }
        let pivot = a[(c, c)].clone();
        det = det * pivot.clone();
        for r in c + 1..n {
            let f = a[(r, c)].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a[(r, j)].clone() - f.clone() * a[(c, j)].clone();
                a[(r, j)] = v;
            }
        }
    }
    det
}

/// Sylvester's criterion in its semidefinite form: every principal minor of
/// a Hermitian matrix is a nonnegative real. Exponential in `n`.
pub fn psd_by_principal_minors(m: &Matrix<Q>) -> bool {
    let n = m.rows();
    assert!(n < 16, "principal-minor oracle is for small matrices");
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let det = determinant(&m.select_rows(&idx).select_columns(&idx));
        det.conj() == det && rational_sign(&det) != std::cmp::Ordering::Less
    })
}

/// Rank by row reduction with exact zero tests.
pub fn exact_rank(m: &Matrix<Q>) -> usize {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            let tmp = a[(p, j)].clone();
            a[(p, j)] = a[(r, j)].clone();
            a[(r, j)] = tmp;
        }
        let pivot = a[(r, c)].clone();
        for i in r + 1..rows {
            let f = a[(i, c)].clone() / pivot.clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solve `AX = B` by Gauss–Jordan elimination with free variables set to
/// zero; `None` if the system is inconsistent.
pub fn solve_consistent(a: &Matrix<Q>, b: &Matrix<Q>) -> Option<Matrix<Q>> {
    let (rows, n) = a.shape();
    let k = b.cols();
    let mut aug = a.hstack(b);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !aug[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..n + k {
            let tmp = aug[(p, j)].clone();
            aug[(p, j)] = aug[(r, j)].clone();
            aug[(r, j)] = tmp;
        }
        let pivot = aug[(r, c)].clone();
        for j in 0..n + k {
            let v = aug[(r, j)].clone() / pivot.clone();
            aug[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || aug[(i, c)].is_zero() {
                continue;
            }
            let f = aug[(i, c)].clone();
            for j in 0..n + k {
                let v = aug[(i, j)].clone() - f.clone() * aug[(r, j)].clone();
                aug[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| (n..n + k).any(|j| !aug[(i, j)].is_zero())) {
        return None;
    }
    let mut x = Matrix::zeros(n, k);
    for (row, &c) in pivots.iter().enumerate() {
        for j in 0..k {
            x[(c, j)] = aug[(row, n + j)].clone();
        }
    }
    Some(x)
}

/// `ω(A,B) = B*X` for any solution of `AX = B`, since `B*A⁺B = X*AA⁺AX`.
pub fn omega_by_elimination(a: &Matrix<Q>, b: &Matrix<Q>) -> Option<Matrix<Q>> {
    let x = solve_consistent(a, b)?;
    Some(&b.adjoint() * &x)
}

/// `D − ω(A,B)` through [`omega_by_elimination`].
pub fn schur_by_elimination(m: &Block2<Q>) -> Option<Matrix<Q>> {
    let w = omega_by_elimination(m.a.matrix(), &m.b)?;
    Some(m.d.matrix() - &w)
}

/// Result of [`coordinate_descent_infimum`].
#[derive(Clone, Copy, Debug)]
pub struct DescentResult {
    pub value: f64,
    pub sweeps: usize,
}

/// Minimize `z ↦ ⟨𝐀(x−z, y), (x−z, y)⟩` by cyclic exact line search along
/// the real and imaginary coordinate directions of `z`, with step halving as
/// a guard against rounding, starting from `z = 0`. Stops after `max_sweeps`
/// sweeps or when a sweep no longer lowers the value.
pub fn coordinate_descent_infimum(
    m: &Block2<Complex64>,
    x: &Matrix<Complex64>,
    y: &Matrix<Complex64>,
    max_sweeps: usize,
) -> DescentResult {
    let a = m.a.matrix();
    let n = a.rows();
    let by = &m.b * y;
    let dyy = m.d.quadratic_form(y).re;
    // u = x − z is the free variable.
    let mut u: Vec<Complex64> = (0..n).map(|i| x[(i, 0)]).collect();
    let objective = |u: &[Complex64]| -> f64 {
        let mut total = dyy;
        for i in 0..n {
            let mut au = Complex64::new(0.0, 0.0);
            for j in 0..n {
                au += a[(i, j)] * u[j];
            }
            total += (u[i].conj() * au).re + 2.0 * (u[i].conj() * by[(i, 0)]).re;
        }
        total
    };
    let mut value = objective(&u);
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let before = value;
        for k in 0..n {
            let akk = a[(k, k)].re;
            if akk <= 0.0 {
                continue;
            }
            for direction in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut g = by[(k, 0)];
                for j in 0..n {
                    g += a[(k, j)] * u[j];
                }
                // f(u + t·d·e_k) = f(u) + 2t·Re(d̄·g_k) + t²·A_kk.
                let slope = (direction.conj() * g).re;
                let mut t = -slope / akk;
                for _ in 0..40 {
                    let mut trial = u.clone();
                    trial[k] += direction * t;
                    let candidate = objective(&trial);
                    if candidate <= value {
                        u = trial;
                        value = candidate;
                        break;
                    }
                    t *= 0.5;
                }
            }
        }
        if value >= before {
            break;
        }
    }
    DescentResult { value, sweeps }
}

/// Scalars for which the suites have a PSD oracle.
pub trait PsdOracle: Scalar {
    /// PSD test of a Hermitian matrix. `scale` enlarges the float slack for
    /// differences of larger operands and is ignored by the exact oracle.
    fn psd_oracle(m: &Matrix<Self>, scale: f64) -> bool;
    /// Exact rank where available; the float oracle reports `None`.
    fn rank_oracle(m: &Matrix<Self>) -> Option<usize>;
    /// `D − ω(A,B)` by elimination where available.
    fn schur_oracle(m: &Block2<Self>) -> Option<Matrix<Self>>;
    /// A solution of a consistent system `AX = B` by elimination.
    fn solve_oracle(a: &Matrix<Self>, b: &Matrix<Self>) -> Option<Matrix<Self>>;
}

impl PsdOracle for Complex64 {
    fn psd_oracle(m: &Matrix<Self>, scale: f64) -> bool {
        psd_by_eigenvalues(m, scale)
    }
    fn rank_oracle(_m: &Matrix<Self>) -> Option<usize> {
        None
    }
    fn schur_oracle(_m: &Block2<Self>) -> Option<Matrix<Self>> {
        None
    }
    fn solve_oracle(_a: &Matrix<Self>, _b: &Matrix<Self>) -> Option<Matrix<Self>> {
        None
    }
}

impl PsdOracle for GaussianRational {
    fn psd_oracle(m: &Matrix<Self>, _scale: f64) -> bool {
        psd_by_principal_minors(m)
    }
    fn rank_oracle(m: &Matrix<Self>) -> Option<usize> {
        Some(exact_rank(m))
    }
    fn schur_oracle(m: &Block2<Self>) -> Option<Matrix<Self>> {
        schur_by_elimination(m)
    }
    fn solve_oracle(a: &Matrix<Self>, b: &Matrix<Self>) -> Option<Matrix<Self>> {
        solve_consistent(a, b)
    }
}

/// `lo ≤ hi` in the Loewner order according to the oracle. The float slack
/// is measured against the operands and against `scale`, the size of the
/// matrices they were computed from.
pub fn loewner_oracle<S: PsdOracle>(lo: &HermitianMatrix<S>, hi: &HermitianMatrix<S>, scale: f64) -> bool {
    let scale = lo.frobenius_norm().max(hi.frobenius_norm()).max(scale);
    S::psd_oracle(&(hi.matrix() - lo.matrix()), scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn q(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&q(&[&[2, 1], &[1, 1]])), Q::one());
        assert_eq!(determinant(&q(&[&[0, 1], &[1, 0]])), -Q::one());
        assert_eq!(determinant(&q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 5]])), Q::zero());
        assert_eq!(determinant(&Matrix::<Q>::zeros(0, 0)), Q::one());
    }

    #[test]
    fn minors_catch_a_negative_diagonal_hidden_behind_a_zero_leading_minor() {
        // Leading minors are 0, 0, 0 but the (2,2) entry is negative.
        let m = q(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, -1]]);
        assert!(!psd_by_principal_minors(&m));
        assert!(psd_by_principal_minors(&q(&[&[1, 1], &[1, 1]])));
        assert!(!psd_by_principal_minors(&q(&[&[1, 2], &[2, 1]])));
    }

    #[test]
    fn eigenvalue_oracle_examples() {
        let m = Matrix::<Complex64>::from_i64_rows(&[&[1, 2], &[2, 1]]);
        let values = eigenvalues(&m);
        assert!((values[0] + 1.0).abs() < 1e-12 && (values[1] - 3.0).abs() < 1e-12);
        assert!(!psd_by_eigenvalues(&m, 0.0));
        assert!(psd_by_eigenvalues(&Matrix::zeros(3, 3), 0.0));
    }

    #[test]
    fn elimination_examples() {
        let w = omega_by_elimination(&q(&[&[1, 1], &[1, 1]]), &q(&[&[1], &[1]])).unwrap();
        assert_eq!(w, q(&[&[1]]));
        assert!(omega_by_elimination(&q(&[&[1, 0], &[0, 0]]), &q(&[&[0], &[1]])).is_none());
        let m = Block2::from_matrix(q(&[&[2, 1], &[1, 1]]), 1).unwrap();
        assert_eq!(schur_by_elimination(&m).unwrap(), Matrix::from_rows(vec![vec![ratio(1, 2)]]));
        assert_eq!(exact_rank(&q(&[&[1, 2], &[2, 4], &[0, 0]])), 1);
    }

    #[test]
    fn coordinate_descent_finds_the_two_by_two_infimum() {
        let m = Block2::from_matrix(Matrix::<Complex64>::from_i64_rows(&[&[2, 1], &[1, 1]]), 1).unwrap();
        let x = Matrix::from_i64_rows(&[&[7]]);
        let y = Matrix::from_i64_rows(&[&[1]]);
        let r = coordinate_descent_infimum(&m, &x, &y, 10_000);
        assert!((r.value - 0.5).abs() < 1e-12);
    }
}
