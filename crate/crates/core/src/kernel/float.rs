//! Float backend hooks: a one-sided Jacobi SVD and nalgebra's Hermitian
//! eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};

use super::tolerance::{ToleranceProfile, HERMITIAN_INPUT_SLACK};
use crate::matrix::Matrix;
use crate::scalar::{Complex64, Scalar};

fn to_na(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

fn from_na(m: &DMatrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// `M = Σ σ_k u_k v_k*` with singular values in decreasing order.
struct Svd {
    /// Columns `u_k` for `σ_k > 0`; the rest are left zero.
    u: Vec<Vec<Complex64>>,
    v: Vec<Vec<Complex64>>,
    sigma: Vec<f64>,
}

const JACOBI_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi on the columns of a tall or square matrix.
fn jacobi_svd_tall(m: &Matrix<Complex64>) -> Svd {
    let (rows, n) = m.shape();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|j| (0..rows).map(|i| m[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() }).collect())
        .collect();
    let norm2 = |x: &[Complex64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(&a[p]);
                let beta = norm2(&a[q]);
                let gamma: Complex64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut a, &mut v] {
                    for i in 0..cols[p].len() {
                        let xp = cols[p][i];
                        let xq = cols[q][i] * phase;
                        cols[p][i] = xp * c - xq * s;
                        cols[q][i] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sigma_all: Vec<f64> = a.iter().map(|col| norm2(col).sqrt()).collect();
    order.sort_by(|&i, &j| sigma_all[j].total_cmp(&sigma_all[i]));
    let sigma = order.iter().map(|&k| sigma_all[k]).collect();
    let u = order
        .iter()
        .map(|&k| {
            let s = sigma_all[k];
            a[k].iter().map(|z| if s > 0.0 { z / s } else { Complex64::zero() }).collect()
        })
        .collect();
    let v = order.iter().map(|&k| v[k].clone()).collect();
    Svd { u, v, sigma }
}

fn jacobi_svd(m: &Matrix<Complex64>) -> Svd {
    if m.rows() >= m.cols() {
        jacobi_svd_tall(m)
    } else {
        let t = jacobi_svd_tall(&m.adjoint());
        Svd {
            u: t.v,
            v: t.u,
            sigma: t.sigma,
        }
    }
}

struct Thin {
    svd: Svd,
    kept: usize,
}

fn thin_svd(m: &Matrix<Complex64>, scale: f64, tol: &ToleranceProfile) -> Option<Thin> {
    if m.is_empty() || m.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    let svd = jacobi_svd(m);
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return None;
    }
    let threshold = tol.rank_rel_threshold * sigma_max.max(scale);
    let kept = svd.sigma.iter().take_while(|&&s| s > threshold).count();
    Some(Thin { svd, kept })
}

/// `F` has orthonormal columns spanning `ran M`; `G = Σ_r V_r*`.
pub fn rank_factorization(m: &Matrix<Complex64>, scale: f64, tol: &ToleranceProfile) -> (Matrix<Complex64>, Matrix<Complex64>) {
    let Some(Thin { svd, kept }) = thin_svd(m, scale, tol) else {
        return (Matrix::zeros(m.rows(), 0), Matrix::zeros(0, m.cols()));
    };
    let f = Matrix::from_fn(m.rows(), kept, |i, k| svd.u[k][i]);
    let g = Matrix::from_fn(kept, m.cols(), |k, j| svd.v[k][j].conj() * svd.sigma[k]);
    (f, g)
}

pub fn pseudo_inverse(m: &Matrix<Complex64>, scale: f64, tol: &ToleranceProfile) -> Matrix<Complex64> {
    let Some(Thin { svd, kept }) = thin_svd(m, scale, tol) else {
        return Matrix::zeros(m.cols(), m.rows());
    };
    Matrix::from_fn(m.cols(), m.rows(), |i, j| {
        (0..kept).fold(Complex64::zero(), |acc, k| acc + svd.v[k][i] * svd.u[k][j].conj() / svd.sigma[k])
    })
}

/// Eigenvalues ascending, eigenvectors as matching columns.
pub fn hermitian_eigen(h: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let n = h.rows();
    if n == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(to_na(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = from_na(&eig.eigenvectors).select_columns(&order);
    (values, vectors)
}

pub fn is_psd_scaled(h: &Matrix<Complex64>, scale: f64, tol: &ToleranceProfile) -> bool {
    let (values, _) = hermitian_eigen(h);
    let Some(&min) = values.first() else {
        return true;
    };
    let spread = values.iter().map(|v| v.abs()).fold(scale.abs(), f64::max);
    let spread = if spread == 0.0 { 1.0 } else { spread };
    min >= -tol.psd_rel_slack * spread
}

pub fn hermitize(m: Matrix<Complex64>) -> Option<Matrix<Complex64>> {
    if !m.is_square() || m.entries().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return None;
    }
    let deviation = m.max_abs_diff(&m.adjoint());
    if deviation <= HERMITIAN_INPUT_SLACK * m.max_abs() {
        Some(m.hermitian_part())
    } else {
        None
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    jacobi_svd(m).sigma[0]
}
