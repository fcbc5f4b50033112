//! Generalized Schur complements and shorted operators of Hermitian
//! 2×2 block matrices `[[A, B], [B*, D]]`.
//!
//! For a block matrix of positive type (`(A, B)` a positive pair) the
//! generalized Schur complement is `σ = D − ω(A,B)` and the shorted operator
//! is `diag(0, σ)`. Every operation here is exact on the rational backend
//! except the ones that go through a square root.

use crate::error::{Error, Result};
use crate::kernel::{
    agree, is_psd, is_psd_relative, loewner_leq, loewner_leq_scaled, min_eigenvalue, orthoprojector, pseudo_inverse, HermitianMatrix,
    Subspace, ToleranceProfile,
};
use crate::matrix::Matrix;
use crate::pair::{build_pair_scaled, check_positive_pair, omega, OmegaRoute, PairCheck};
use crate::scalar::Scalar;
use crate::sqrt::{minimal_square_root, SquareRootFactor, FACTOR_AGREEMENT};

/// Hermitian 2×2 block matrix with partition `(n_X, n_Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block2<S> {
    pub a: HermitianMatrix<S>,
    pub b: Matrix<S>,
    pub d: HermitianMatrix<S>,
}

impl<S: Scalar> Block2<S> {
    pub fn new(a: HermitianMatrix<S>, b: Matrix<S>, d: HermitianMatrix<S>) -> Result<Self> {
        if b.shape() != (a.dim(), d.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "B is {}x{} but the diagonal blocks are {}x{} and {}x{}",
                b.rows(),
                b.cols(),
                a.dim(),
                a.dim(),
                d.dim(),
                d.dim()
            )));
        }
        Ok(Block2 { a, b, d })
    }

    /// Split an assembled Hermitian matrix after its first `n_x` coordinates.
    pub fn from_hermitian(m: &HermitianMatrix<S>, n_x: usize) -> Result<Self> {
        let n = m.dim();
        if n_x > n {
            return Err(Error::DimensionMismatch(format!("partition {n_x} exceeds dimension {n}")));
        }
        Ok(Block2 {
            a: HermitianMatrix::hermitian_part(&m.submatrix(0, n_x, 0, n_x)),
            b: m.submatrix(0, n_x, n_x, n),
            d: HermitianMatrix::hermitian_part(&m.submatrix(n_x, n, n_x, n)),
        })
    }

    pub fn from_matrix(m: Matrix<S>, n_x: usize) -> Result<Self> {
        Self::from_hermitian(&HermitianMatrix::new(m)?, n_x)
    }

    pub fn n_x(&self) -> usize {
        self.a.dim()
    }

    pub fn n_y(&self) -> usize {
        self.d.dim()
    }

    pub fn partition(&self) -> (usize, usize) {
        (self.n_x(), self.n_y())
    }

    pub fn dim(&self) -> usize {
        self.n_x() + self.n_y()
    }

    pub fn assembled(&self) -> HermitianMatrix<S> {
        HermitianMatrix::hermitian_part(&Matrix::from_blocks(&self.a, &self.b, &self.b.adjoint(), &self.d))
    }

    /// Block-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.partition() != other.partition() {
            return Err(Error::DimensionMismatch("block partitions differ".into()));
        }
        Block2::new(self.a.add(&other.a), &self.b + &other.b, self.d.add(&other.d))
    }
}

/// Hermitian 3×3 block matrix
/// `[[A, B, B_X], [B*, D, B_Y], [B_X*, B_Y*, D₁]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block3<S> {
    pub a: HermitianMatrix<S>,
    pub b: Matrix<S>,
    pub b_x: Matrix<S>,
    pub d: HermitianMatrix<S>,
    pub b_y: Matrix<S>,
    pub d1: HermitianMatrix<S>,
}

impl<S: Scalar> Block3<S> {
    pub fn from_hermitian(m: &HermitianMatrix<S>, (n_x, n_y, n_z): (usize, usize, usize)) -> Result<Self> {
        if n_x + n_y + n_z != m.dim() {
            return Err(Error::DimensionMismatch(format!(
                "partition ({n_x}, {n_y}, {n_z}) does not sum to {}",
                m.dim()
            )));
        }
        let (y0, z0, end) = (n_x, n_x + n_y, m.dim());
        Ok(Block3 {
            a: HermitianMatrix::hermitian_part(&m.submatrix(0, y0, 0, y0)),
            b: m.submatrix(0, y0, y0, z0),
            b_x: m.submatrix(0, y0, z0, end),
            d: HermitianMatrix::hermitian_part(&m.submatrix(y0, z0, y0, z0)),
            b_y: m.submatrix(y0, z0, z0, end),
            d1: HermitianMatrix::hermitian_part(&m.submatrix(z0, end, z0, end)),
        })
    }

    pub fn partition(&self) -> (usize, usize, usize) {
        (self.a.dim(), self.d.dim(), self.d1.dim())
    }

    pub fn assembled(&self) -> HermitianMatrix<S> {
        let top = self.a.hstack(&self.b).hstack(&self.b_x);
        let mid = self.b.adjoint().hstack(&self.d).hstack(&self.b_y);
        let bottom = self.b_x.adjoint().hstack(&self.b_y.adjoint()).hstack(&self.d1);
        HermitianMatrix::hermitian_part(&top.vstack(&mid).vstack(&bottom))
    }

    /// The leading 2×2 block matrix `[[A, B], [B*, D]]`.
    pub fn leading(&self) -> Block2<S> {
        Block2 {
            a: self.a.clone(),
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// The whole matrix split after the X coordinates.
    pub fn split_after_x(&self) -> Block2<S> {
        let lower = Matrix::from_blocks(&self.d, &self.b_y, &self.b_y.adjoint(), &self.d1);
        Block2 {
            a: self.a.clone(),
            b: self.b.hstack(&self.b_x),
            d: HermitianMatrix::hermitian_part(&lower),
        }
    }

    /// The whole matrix split after the X×Y coordinates.
    pub fn split_after_y(&self) -> Block2<S> {
        Block2 {
            a: self.leading().assembled(),
            b: self.b_x.vstack(&self.b_y),
            d: self.d1.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShortedResult<S> {
    /// `σ = D − ω(A,B)`.
    pub sigma: HermitianMatrix<S>,
    /// `diag(0, σ)` with the source partition.
    pub shorted: Block2<S>,
    pub positive_type: bool,
}

impl<S: Scalar> ShortedResult<S> {
    fn from_sigma(n_x: usize, sigma: HermitianMatrix<S>) -> Self {
        let n_y = sigma.dim();
        ShortedResult {
            shorted: Block2 {
                a: HermitianMatrix::zeros(n_x),
                b: Matrix::zeros(n_x, n_y),
                d: sigma.clone(),
            },
            sigma,
            positive_type: true,
        }
    }

    /// The assembled shorted operator.
    pub fn operator(&self) -> HermitianMatrix<S> {
        self.shorted.assembled()
    }
}

fn require_positive_type<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<PairCheck> {
    let check = check_positive_pair(&m.a, &m.b, tol)?;
    if !check.positive {
        return Err(Error::NotPositivePair(check.diagnostic));
    }
    Ok(check)
}

/// Generalized Schur complement and shorted operator.
pub fn schur_complement<S: Scalar>(m: &Block2<S>, route: OmegaRoute, tol: &ToleranceProfile) -> Result<ShortedResult<S>> {
    schur_complement_scaled(m, route, 0.0, tol)
}

fn schur_complement_scaled<S: Scalar>(
    m: &Block2<S>,
    route: OmegaRoute,
    scale: f64,
    tol: &ToleranceProfile,
) -> Result<ShortedResult<S>> {
    let pair = build_pair_scaled(&m.a, &m.b, route, scale, tol)?;
    Ok(ShortedResult::from_sigma(m.n_x(), m.d.sub(&pair.omega)))
}

/// `𝒮(𝐀)` as an assembled matrix, via the pseudo-inverse route.
pub fn shorted_operator<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<HermitianMatrix<S>> {
    Ok(schur_complement(m, OmegaRoute::PseudoInverse, tol)?.operator())
}

/// `𝒮(𝐀) = R*PR` for a square root `R` of the assembled matrix, with `P` the
/// orthoprojector onto the complement of `R·X`. Float only.
pub fn shorted_via_projection<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<ShortedResult<S>> {
    let full = m.assembled();
    let root = minimal_square_root(&full, tol)?;
    let (n_x, n) = (m.n_x(), m.dim());
    let r_x = root.r.submatrix(0, root.hilbert_dim(), 0, n_x);
    let complement = Subspace::column_space_scaled(&r_x, root.r.frobenius_norm(), tol).orthogonal_complement(tol);
    let p = orthoprojector(&complement);
    let shorted = HermitianMatrix::hermitian_part(&(&(&root.adjoint() * &p) * &root.r));
    let leak = shorted.submatrix(0, n_x, 0, n).max_abs();
    if leak > FACTOR_AGREEMENT * (1.0 + full.max_abs()) {
        return Err(Error::InternalAssertion(format!(
            "projected operator does not vanish on X (max entry {leak:e})"
        )));
    }
    let sigma = HermitianMatrix::hermitian_part(&shorted.submatrix(n_x, n, n_x, n));
    Ok(ShortedResult::from_sigma(n_x, sigma))
}

/// `⟨𝐀(x−z, y), (x−z, y)⟩` at a given `z`.
pub fn variational_objective<S: Scalar>(m: &Block2<S>, x: &Matrix<S>, y: &Matrix<S>, z: &Matrix<S>) -> S {
    let v = (x - z).vstack(y);
    m.assembled().quadratic_form(&v).re()
}

/// `inf_z ⟨𝐀(x−z, y), (x−z, y)⟩`, evaluated at the minimizer
/// `z = x + A⁺By`.
pub fn variational_value<S: Scalar>(m: &Block2<S>, x: &Matrix<S>, y: &Matrix<S>, tol: &ToleranceProfile) -> Result<S> {
    if x.shape() != (m.n_x(), 1) || y.shape() != (m.n_y(), 1) {
        return Err(Error::DimensionMismatch(format!(
            "expected vectors of length {} and {}",
            m.n_x(),
            m.n_y()
        )));
    }
    require_positive_type(m, tol)?;
    let z = x + &(&(&pseudo_inverse(&m.a, tol) * &m.b) * y);
    Ok(variational_objective(m, x, y, &z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlbertClass {
    Psd,
    NotPositiveType,
    SigmaNotPsd,
}

impl AlbertClass {
    pub fn label(self) -> &'static str {
        match self {
            AlbertClass::Psd => "PSD",
            AlbertClass::NotPositiveType => "NOT_POSITIVE_TYPE",
            AlbertClass::SigmaNotPsd => "SIGMA_NOT_PSD",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlbertVerdict<S> {
    pub classification: AlbertClass,
    pub sigma: Option<HermitianMatrix<S>>,
}

/// Classify a Hermitian block matrix: PSD iff positive type with PSD `σ`.
pub fn albert_classify<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> AlbertVerdict<S> {
    let positive = matches!(check_positive_pair(&m.a, &m.b, tol), Ok(check) if check.positive);
    if !positive {
        return AlbertVerdict {
            classification: AlbertClass::NotPositiveType,
            sigma: None,
        };
    }
    let sigma = match omega(&m.a, &m.b, tol) {
        Ok(w) => m.d.sub(&w),
        Err(_) => {
            return AlbertVerdict {
                classification: AlbertClass::NotPositiveType,
                sigma: None,
            }
        }
    };
    let scale = m.assembled().frobenius_norm();
    let classification = if is_psd_relative(&sigma, scale, tol) {
        AlbertClass::Psd
    } else {
        AlbertClass::SigmaNotPsd
    };
    AlbertVerdict {
        classification,
        sigma: Some(sigma),
    }
}

fn require_psd_block<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<HermitianMatrix<S>> {
    let full = m.assembled();
    if !is_psd(&full, tol) {
        return Err(Error::NotNonNegative);
    }
    Ok(full)
}

#[derive(Clone, Debug)]
pub struct ContractionDecomposition<S> {
    /// `B = R_A*·K·R_D`.
    pub k: Matrix<S>,
    pub root_a: SquareRootFactor<S>,
    pub root_d: SquareRootFactor<S>,
    pub op_norm: f64,
}

/// Contraction `K` with `B = R_A*KR_D` and `ran K ⊆ ran R_A`. Float only.
pub fn contraction_decomposition<S: Scalar>(m: &Block2<S>, tol: &ToleranceProfile) -> Result<ContractionDecomposition<S>> {
    require_psd_block(m, tol)?;
    let root_a = minimal_square_root(&m.a, tol)?;
    let root_d = minimal_square_root(&m.d, tol)?;
    let raw = &(&pseudo_inverse(&root_a.adjoint(), tol) * &m.b) * &pseudo_inverse(&root_d.r, tol);
    let onto_range = orthoprojector(&Subspace::column_space(&root_a.r, tol));
    let k = &onto_range * &raw;
    let op_norm = crate::kernel::spectral_norm(&k);
    Ok(ContractionDecomposition {
        k,
        root_a,
        root_d,
        op_norm,
    })
}

/// Relative agreement for float comparisons of nested complements.
pub const QUOTIENT_AGREEMENT: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct QuotientReport<S> {
    /// `𝐃/A`.
    pub d_over_a: HermitianMatrix<S>,
    /// `𝐀/A`.
    pub a_over_a: HermitianMatrix<S>,
    pub corner_matches: bool,
    /// `(𝐃/A)/(𝐀/A)`.
    pub nested: HermitianMatrix<S>,
    /// `𝐃/𝐀`.
    pub direct: HermitianMatrix<S>,
    pub identity_holds: bool,
}

impl<S> QuotientReport<S> {
    pub fn holds(&self) -> bool {
        self.corner_matches && self.identity_holds
    }
}

/// Quotient formula for nested Schur complements of a PSD 3-block matrix.
pub fn quotient_formula_check<S: Scalar>(m: &Block3<S>, tol: &ToleranceProfile) -> Result<QuotientReport<S>> {
    let full = m.assembled();
    if !is_psd(&full, tol) {
        return Err(Error::NotNonNegative);
    }
    // The nested step works on a computed 𝐃/A, which can be rounding noise.
    let scale = full.frobenius_norm();
    let route = OmegaRoute::PseudoInverse;
    let (_, n_y, _) = m.partition();
    let d_over_a = schur_complement_scaled(&m.split_after_x(), route, scale, tol)?.sigma;
    let a_over_a = schur_complement_scaled(&m.leading(), route, scale, tol)?.sigma;
    let corner = d_over_a.submatrix(0, n_y, 0, n_y);
    let corner_matches = agree(&corner, &a_over_a, QUOTIENT_AGREEMENT);
    let nested = schur_complement_scaled(&Block2::from_hermitian(&d_over_a, n_y)?, route, scale, tol)?.sigma;
    let direct = schur_complement_scaled(&m.split_after_y(), route, scale, tol)?.sigma;
    let identity_holds = agree(&nested, &direct, QUOTIENT_AGREEMENT);
    Ok(QuotientReport {
        d_over_a,
        a_over_a,
        corner_matches,
        nested,
        direct,
        identity_holds,
    })
}

/// `𝐀_ex = [[A, B], [B*, ω(A,B)]]`, the least PSD completion.
pub fn minimal_completion<S: Scalar>(a: &HermitianMatrix<S>, b: &Matrix<S>, tol: &ToleranceProfile) -> Result<Block2<S>> {
    let w = omega(a, b, tol)?;
    Block2::new(a.clone(), b.clone(), w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundCheck {
    /// The candidate lies below every `𝒮(𝐀ₙ)`.
    pub bounds_chain: bool,
    /// The candidate lies below `𝒮(𝐀₀)`; `None` if the limit is not of positive type.
    pub below_limit: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct InfimumReport<S> {
    pub limit_positive_type: bool,
    pub limit_shorted: Option<HermitianMatrix<S>>,
    pub chain_shorted: Vec<Option<HermitianMatrix<S>>>,
    /// Smallest eigenvalue of each `𝒮(𝐀ₙ)`, in binary64.
    pub shorted_min_eigenvalues: Vec<Option<f64>>,
    /// `𝒮(𝐀₀) ≤ 𝒮(𝐀ₙ)` for every `n`.
    pub limit_below_chain: Option<bool>,
    pub lower_bounds: Vec<LowerBoundCheck>,
}

impl<S> InfimumReport<S> {
    /// When the limit has positive type: `𝒮(𝐀₀)` lies below the chain and
    /// above every candidate that bounds the chain.
    pub fn consistent(&self) -> bool {
        if !self.limit_positive_type {
            return true;
        }
        self.limit_below_chain == Some(true)
            && self
                .lower_bounds
                .iter()
                .all(|lb| !lb.bounds_chain || lb.below_limit == Some(true))
    }
}

/// Shorted operators along a Loewner-decreasing chain with a supplied limit.
pub fn infimum_of_chain<S: Scalar>(
    chain: &[Block2<S>],
    limit: &Block2<S>,
    lower_bounds: &[HermitianMatrix<S>],
    tol: &ToleranceProfile,
) -> Result<InfimumReport<S>> {
    if chain.iter().any(|m| m.partition() != limit.partition())
        || lower_bounds.iter().any(|l| l.dim() != limit.dim())
    {
        return Err(Error::DimensionMismatch("chain members have different partitions".into()));
    }
    let assembled: Vec<_> = chain.iter().map(Block2::assembled).collect();
    for (i, pair) in assembled.windows(2).enumerate() {
        if !loewner_leq(&pair[1], &pair[0], tol)? {
            return Err(Error::NotDecreasing(i + 1));
        }
    }
    if let Some(last) = assembled.last() {
        if !loewner_leq(&limit.assembled(), last, tol)? {
            return Err(Error::NotDecreasing(chain.len()));
        }
    }

    // Shorted operators can vanish in exact arithmetic, so float comparisons
    // among them are measured against the size of the chain.
    let scale = assembled
        .iter()
        .map(|m| m.frobenius_norm())
        .fold(limit.assembled().frobenius_norm(), f64::max);
    let shorted_of = |m: &Block2<S>| -> Option<HermitianMatrix<S>> {
        match check_positive_pair(&m.a, &m.b, tol) {
            Ok(check) if check.positive => shorted_operator(m, tol).ok(),
            _ => None,
        }
    };
    let chain_shorted: Vec<_> = chain.iter().map(shorted_of).collect();
    let shorted_min_eigenvalues = chain_shorted.iter().map(|s| s.as_ref().map(min_eigenvalue)).collect();
    let limit_shorted = shorted_of(limit);
    let limit_positive_type = limit_shorted.is_some();

    let below_all = |l: &HermitianMatrix<S>| -> Result<bool> {
        for s in &chain_shorted {
            match s {
                Some(s) if loewner_leq_scaled(l, s, scale, tol)? => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    };
    let limit_below_chain = match &limit_shorted {
        Some(s0) => Some(below_all(s0)?),
        None => None,
    };
    let mut checks = Vec::with_capacity(lower_bounds.len());
    for l in lower_bounds {
        let below_limit = match &limit_shorted {
            Some(s0) => Some(loewner_leq_scaled(l, s0, scale, tol)?),
            None => None,
        };
        checks.push(LowerBoundCheck {
            bounds_chain: below_all(l)?,
            below_limit,
        });
    }
    Ok(InfimumReport {
        limit_positive_type,
        limit_shorted,
        chain_shorted,
        shorted_min_eigenvalues,
        limit_below_chain,
        lower_bounds: checks,
    })
}

/// `{0}^{n_X} × S^{n_Y}` inside `S^{n_X+n_Y}`.
pub fn y_subspace<S: Scalar>(n_x: usize, n_y: usize) -> Subspace<S> {
    Subspace::coordinate(n_x + n_y, n_x, n_y)
}
