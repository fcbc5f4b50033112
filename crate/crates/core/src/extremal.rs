//! Extremal (`𝒮(𝐀) = 0`) and doubly extremal block matrices.

use crate::error::{Error, Result};
use crate::kernel::{
    agree, is_psd, orthoprojector, rank, HermitianMatrix, Subspace, ToleranceProfile,
};
use crate::matrix::Matrix;
use crate::pair::{build_pair, check_positive_pair, omega, omega_from_root, OmegaRoute};
use crate::scalar::Scalar;
use crate::schur::{variational_value, y_subspace, Block2};
use crate::sqrt::minimal_square_root;

/// Float tolerance for `σ = 0` and `ω(ω(A,B),B*) = A`, relative to `1 + max|·|`.
pub const EXTREMAL_TOLERANCE: f64 = 1e-9;

fn sigma_of<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<HermitianMatrix<S>> {
    if !is_psd(&m.assembled(), tol) {
        return Err(Error::NotNonNegative);
    }
    Ok(m.d.sub(&omega(&m.a, &m.b, tol)?))
}

fn negligible<S: Scalar>(value: &Matrix<S>, reference: f64) -> bool {
    if S::is_exact() {
        value.is_zero()
    } else {
        value.max_abs() <= EXTREMAL_TOLERANCE * (1.0 + reference)
    }
}

pub fn is_extremal<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<bool> {
    let sigma = sigma_of(m, tol)?;
    Ok(negligible(&sigma, m.d.max_abs()))
}

#[derive(Clone, Debug)]
pub struct ExtremalityReport<S> {
    /// (i) `σ = 0`.
    pub sigma_vanishes: bool,
    /// (ii) the variational infimum vanishes at every probe.
    pub infimum_vanishes: bool,
    /// (iii) `R·X` spans `ran R` for a square root of the assembled matrix.
    /// Float only.
    pub root_ranges_coincide: Option<bool>,
    /// (iv) `ran 𝐀 ∩ ({0} × S^{n_Y}) = {0}`.
    pub range_meets_y_trivially: bool,
    pub is_extremal: bool,
    /// Doubly-extremal verdict for the completion `𝐀_ex` of `(A, B)`.
    pub is_doubly_extremal: bool,
    pub double_omega: HermitianMatrix<S>,
    /// `dim H₁`, float only.
    pub h1_dim: Option<usize>,
}

impl<S> ExtremalityReport<S> {
    pub fn criteria_agree(&self) -> bool {
        let v = self.sigma_vanishes;
        self.infimum_vanishes == v
            && self.range_meets_y_trivially == v
            && self.root_ranges_coincide.is_none_or(|c| c == v)
    }
}

/// Evaluate the four equivalent extremality criteria on a PSD block matrix.
///
/// Criterion (ii) probes `y = e_j` with `x ∈ {0, 1}`: the infimum is
/// `⟨σy, y⟩` and a PSD `σ` vanishes iff its diagonal does.
pub fn extremality_criteria<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<ExtremalityReport<S>> {
    let sigma = sigma_of(m, tol)?;
    let d_scale = m.d.max_abs();
    let sigma_vanishes = negligible(&sigma, d_scale);

    let (n_x, n_y) = m.partition();
    let mut infimum_vanishes = true;
    for x in [Matrix::zeros(n_x, 1), Matrix::from_fn(n_x, 1, |_, _| S::one())] {
        for j in 0..n_y {
            let value = variational_value(m, &x, &Matrix::unit_vector(n_y, j), tol)?;
            infimum_vanishes &= negligible(&Matrix::column_vector(vec![value]), d_scale);
        }
    }

    let full = m.assembled();
    let root_ranges_coincide = if S::is_exact() {
        None
    } else {
        let root = minimal_square_root(&full, tol)?;
        let r_x = root.r.submatrix(0, root.hilbert_dim(), 0, n_x);
        let rx_span = Subspace::column_space_scaled(&r_x, root.r.frobenius_norm(), tol);
        let r_span = Subspace::column_space(&root.r, tol);
        Some(rx_span.equals(&r_span, tol)?)
    };

    let range_meets_y_trivially = Subspace::column_space(&full, tol)
        .intersect(&y_subspace(n_x, n_y), tol)?
        .is_zero();

    let double = double_omega(&m.a, &m.b, tol)?;
    let is_doubly = is_doubly_extremal(&m.a, &m.b, tol)?;
    let h1_dim = if S::is_exact() {
        None
    } else {
        Some(h1_subspace(&m.a, &m.b, tol)?.dim())
    };
    Ok(ExtremalityReport {
        sigma_vanishes,
        infimum_vanishes,
        root_ranges_coincide,
        range_meets_y_trivially,
        is_extremal: sigma_vanishes,
        is_doubly_extremal: is_doubly,
        double_omega: double,
        h1_dim,
    })
}

/// `ω(ω(A,B), B*)` as `B·ω⁺·B*`.
fn double_omega_pinv<S: Scalar>(
    w: &HermitianMatrix<S>,
    b: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<HermitianMatrix<S>> {
    let b_adj = b.adjoint();
    let check = check_positive_pair(w, &b_adj, tol)?;
    if !check.positive {
        return Err(Error::InternalAssertion(format!(
            "(ω(A,B), B*) is not a positive pair: {}",
            check.diagnostic
        )));
    }
    omega(w, &b_adj, tol)
}

/// `R*·P_B·R`, with `P_B` the orthoprojector onto `ran T`. Float only.
pub fn double_omega_projection<S: Scalar>(
    a: &HermitianMatrix<S>,
    b: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<HermitianMatrix<S>> {
    let root = minimal_square_root(a, tol)?;
    let (t, _) = omega_from_root(&root, b, tol);
    let p_b = orthoprojector(&Subspace::column_space(&t, tol));
    Ok(HermitianMatrix::hermitian_part(&(&(&root.adjoint() * &p_b) * &root.r)))
}

/// `ω(ω(A,B), B*)`. On float the projection route is computed as well and
/// must agree.
pub fn double_omega<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, tol: &ToleranceProfile) -> Result<HermitianMatrix<S>> {
    let w = omega(a, b, tol)?;
    let result = double_omega_pinv(&w, b, tol)?;
    if !S::is_exact() {
        let projected = double_omega_projection(a, b, tol)?;
        if !agree(&projected, &result, EXTREMAL_TOLERANCE) {
            return Err(Error::InternalAssertion(format!(
                "double ω routes disagree by {:e}",
                projected.max_abs_diff(&result)
            )));
        }
    }
    Ok(result)
}

/// `ω(ω(ω(A,B), B*), B)`, which returns `ω(A,B)`.
pub fn triple_omega<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, tol: &ToleranceProfile) -> Result<HermitianMatrix<S>> {
    let w = omega(a, b, tol)?;
    let ww = double_omega_pinv(&w, b, tol)?;
    omega(&ww, b, tol)
}

/// `ω(ω(A,B), B*) = A`, cross-checked against `rank ω(A,B) = rank A`.
pub fn is_doubly_extremal<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, tol: &ToleranceProfile) -> Result<bool> {
    let w = omega(a, b, tol)?;
    let double = double_omega_pinv(&w, b, tol)?;
    let by_identity = agree(&double, a, EXTREMAL_TOLERANCE);
    let by_rank = rank(&w, tol) == rank(a, tol);
    if by_identity != by_rank {
        return Err(Error::InternalAssertion(format!(
            "double ω identity says {by_identity} but the rank test says {by_rank}"
        )));
    }
    Ok(by_identity)
}

/// `H₁ = ran R ∩ ker T*` for a minimal square root `R` of `A`. Float only.
pub fn h1_subspace<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, tol: &ToleranceProfile) -> Result<Subspace<S>> {
    let pair = build_pair(a, b, OmegaRoute::SquareRoot, tol)?;
    let root = pair.root.expect("square-root route keeps its factor");
    let t = pair.t.expect("square-root route keeps T");
    let h1 = Subspace::column_space(&root.r, tol).intersect(&Subspace::kernel(&t.adjoint(), tol), tol)?;
    let doubly = is_doubly_extremal(a, b, tol)?;
    if h1.is_zero() != doubly {
        return Err(Error::InternalAssertion(format!(
            "dim H₁ = {} but doubly extremal = {doubly}",
            h1.dim()
        )));
    }
    Ok(h1)
}

#[derive(Clone, Debug)]
pub struct KernelEqualityReport<S> {
    pub ker_a: Subspace<S>,
    pub ker_b_adjoint: Subspace<S>,
    pub kernels_equal: bool,
    pub doubly_extremal: bool,
}

impl<S> KernelEqualityReport<S> {
    /// Kernel equality and double extremality coincide in finite dimensions.
    pub fn equivalence_holds(&self) -> bool {
        self.kernels_equal == self.doubly_extremal
    }
}

pub fn kernel_equality_check<S: Scalar>(
    a: &HermitianMatrix<S>,
    b: &Matrix<S>,
    tol: &ToleranceProfile,
) -> Result<KernelEqualityReport<S>> {
    let check = check_positive_pair(a, b, tol)?;
    if !check.positive {
        return Err(Error::NotPositivePair(check.diagnostic));
    }
    let ker_a = Subspace::kernel(a, tol);
    let ker_b_adjoint = Subspace::kernel(&b.adjoint(), tol);
    let kernels_equal = ker_a.equals(&ker_b_adjoint, tol)?;
    let doubly_extremal = is_doubly_extremal(a, b, tol)?;
    Ok(KernelEqualityReport {
        ker_a,
        ker_b_adjoint,
        kernels_equal,
        doubly_extremal,
    })
}

#[cfg(test)]
mod tests;
