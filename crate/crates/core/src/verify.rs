//! Property suites over seeded instance streams.
//!
//! Each suite draws `count` instances, instance `i` from
//! [`Generator::for_instance`], checks it against the library and the
//! reference computations in [`oracle`], and reports the failures. Instances
//! are independent, so they are checked in parallel; the report does not
//! depend on the thread count.

pub mod oracle;

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extremal::{extremality_criteria, is_doubly_extremal, kernel_equality_check, triple_omega, EXTREMAL_TOLERANCE};
use crate::generators::{GenConfig, Generator};
use crate::kernel::{agree, rank, spectral_norm, to_complex64, HermitianMatrix, Subspace, ToleranceProfile};
use crate::matrix::Matrix;
use crate::pair::{build_pair, check_positive_pair, omega, omega_from_root, OmegaRoute};
use crate::scalar::{Backend, Complex64, GaussianRational, Scalar};
use crate::schur::{
    albert_classify, infimum_of_chain, minimal_completion, quotient_formula_check, schur_complement, shorted_operator,
    variational_value, y_subspace, AlbertClass, Block2,
};
use crate::sqrt::{
    cholesky_square_root, douglas_factor_normal_equations, douglas_factorization, minimal_square_root,
    nonminimal_square_root, verify_range_additivity,
};
use oracle::{coordinate_descent_infimum, loewner_oracle, PsdOracle};

type C = Complex64;
type Q = GaussianRational;
type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

trait Context<T> {
    fn ctx(self, what: &str) -> std::result::Result<T, String>;
}

impl<T> Context<T> for Result<T> {
    fn ctx(self, what: &str) -> std::result::Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

/// Tolerances of the float checks.
pub mod limits {
    /// Pairwise agreement of `ω` across square roots.
    pub const OMEGA_AGREEMENT: f64 = 1e-9;
    /// Closed-form infimum against `⟨𝒮(𝐀)(x,y),(x,y)⟩`.
    pub const VARIATIONAL_AGREEMENT: f64 = 1e-8;
    /// Difference of the closed-form infimum between two `x` draws.
    pub const VARIATIONAL_X_INDEPENDENCE: f64 = 1e-10;
    /// How far coordinate descent may stay above the closed form.
    pub const DESCENT_GAP: f64 = 1e-6;
    pub const DESCENT_SWEEPS: usize = 10_000;
    /// Douglas residual, norm excess over `α`, and route agreement.
    pub const DOUGLAS: f64 = 1e-9;
    /// Length of generated chains.
    pub const CHAIN_LENGTH: usize = 10;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Albert,
    SqrtIndependence,
    Variational,
    Quotient,
    Order,
    Douglas,
    Ranges,
    Extremal,
    Infimum,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Albert,
        Suite::SqrtIndependence,
        Suite::Variational,
        Suite::Quotient,
        Suite::Order,
        Suite::Douglas,
        Suite::Ranges,
        Suite::Extremal,
        Suite::Infimum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Albert => "albert",
            Suite::SqrtIndependence => "sqrt-independence",
            Suite::Variational => "variational",
            Suite::Quotient => "quotient",
            Suite::Order => "order",
            Suite::Douglas => "douglas",
            Suite::Ranges => "ranges",
            Suite::Extremal => "extremal",
            Suite::Infimum => "infimum",
        }
    }

    /// Suites built on square roots exist on the float backend only.
    pub fn supports(self, backend: Backend) -> bool {
        backend == Backend::Float || !matches!(self, Suite::SqrtIndependence | Suite::Douglas)
    }

    /// Dimension bounds used by the suite's generator.
    pub fn dims(self, backend: Backend) -> (usize, usize) {
        match (self, backend) {
            (Suite::Quotient, _) => (1, 3),
            (_, Backend::Float) => (1, 8),
            (_, Backend::Rational) => (1, 5),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?} (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub backend: Backend,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `"passed/count pass"`.
    pub fn summary(&self) -> String {
        format!("{}/{} pass", self.passed, self.count)
    }
}

/// Run `count` instances of `suite` on `backend`.
pub fn run_suite(suite: Suite, backend: Backend, count: usize, seed: u64, tol: &ToleranceProfile) -> Result<SuiteReport> {
    if !suite.supports(backend) {
        return Err(Error::InvalidArgument(format!(
            "suite {suite} needs the float backend"
        )));
    }
    let (min_dim, max_dim) = suite.dims(backend);
    let cfg = GenConfig::new(seed, backend).with_dims(min_dim, max_dim);
    let outcomes: Vec<Check> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut g = Generator::for_instance(&cfg, i as u64);
            catch_unwind(AssertUnwindSafe(|| match backend {
                Backend::Float => check_float(suite, &mut g, i, tol),
                Backend::Rational => check_generic::<Q>(suite, &mut g, i, tol),
            }))
            .unwrap_or_else(|panic| {
                let text = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {text}"))
            })
        })
        .collect();
    let failures: Vec<Failure> = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(index, outcome)| outcome.err().map(|message| Failure { index, message }))
        .collect();
    Ok(SuiteReport {
        suite,
        backend,
        seed,
        count,
        passed: count - failures.len(),
        failures,
    })
}

fn check_float(suite: Suite, g: &mut Generator, index: usize, tol: &ToleranceProfile) -> Check {
    match suite {
        Suite::SqrtIndependence => sqrt_independence(g, tol),
        Suite::Douglas => douglas(g, tol),
        _ => check_generic::<C>(suite, g, index, tol),
    }
}

fn check_generic<S: PsdOracle>(suite: Suite, g: &mut Generator, index: usize, tol: &ToleranceProfile) -> Check {
    match suite {
        Suite::Albert => albert::<S>(g, tol),
        Suite::Variational => variational::<S>(g, tol),
        Suite::Quotient => quotient::<S>(g, tol),
        Suite::Order => order::<S>(g, tol),
        Suite::Ranges => ranges::<S>(g, tol),
        Suite::Extremal => extremal::<S>(g, tol),
        Suite::Infimum if index % 4 == 3 => unbounded_chain::<S>(g, tol),
        Suite::Infimum => infimum::<S>(g, tol),
        Suite::SqrtIndependence | Suite::Douglas => Err(format!("suite {suite} needs the float backend")),
    }
}

/// Total dimension in the configured range, split at a random point.
fn any_split(g: &mut Generator) -> (usize, usize) {
    let n = g.dim();
    let n_x = g.rng().int_in(0, n as i64) as usize;
    (n_x, n - n_x)
}

/// Total dimension at least 2, both blocks nonempty.
fn proper_split(g: &mut Generator) -> (usize, usize) {
    let max = g.config().max_dim.max(2) as i64;
    let n = g.rng().int_in(2, max);
    let n_x = g.rng().int_in(1, n - 1);
    (n_x as usize, (n - n_x) as usize)
}

fn nonzero_vector<S: Scalar>(g: &mut Generator, n: usize) -> Matrix<S> {
    loop {
        let v = g.vector::<S>(n);
        if v.max_abs() > 0.1 {
            return v;
        }
    }
}

fn diag_zero<S: Scalar>(n_x: usize, d1: &HermitianMatrix<S>) -> HermitianMatrix<S> {
    Block2::new(HermitianMatrix::zeros(n_x), Matrix::zeros(n_x, d1.dim()), d1.clone())
        .expect("shapes agree")
        .assembled()
}

fn albert<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = any_split(g);
    let (m, kind) = g.block2_hermitian_kind::<S>(n_x, n_y);
    let verdict = albert_classify(&m, tol);
    let psd = S::psd_oracle(&m.assembled(), 0.0);
    ensure!(
        (verdict.classification == AlbertClass::Psd) == psd,
        "{kind:?} instance with partition ({n_x},{n_y}) classified {} but the oracle says psd = {psd}",
        verdict.classification.label()
    );
    Ok(())
}

fn sqrt_independence(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);
    let rank_a = g.rng().int_in(0, n_x as i64) as usize;
    let (a, b) = g.positive_pair::<C>(n_x, n_y, rank_a).ctx("generator")?;
    let pad = g.rng().int_in(1, 3) as usize;
    let pinv = build_pair(&a, &b, OmegaRoute::PseudoInverse, tol).ctx("B*A⁺B")?.omega;
    let minimal = minimal_square_root(&a, tol).ctx("minimal root")?;
    let cholesky = cholesky_square_root(&a, tol).ctx("Cholesky root")?;
    let padded = nonminimal_square_root(&a, pad, g.rng(), tol).ctx("padded root")?;
    let routes = [
        ("B*A⁺B", pinv.into_matrix()),
        ("minimal", omega_from_root(&minimal, &b, tol).1.into_matrix()),
        ("Cholesky", omega_from_root(&cholesky, &b, tol).1.into_matrix()),
        ("padded", omega_from_root(&padded, &b, tol).1.into_matrix()),
    ];
    for (i, (name_i, w_i)) in routes.iter().enumerate() {
        for (name_j, w_j) in &routes[i + 1..] {
            ensure!(
                agree(w_i, w_j, limits::OMEGA_AGREEMENT),
                "ω via {name_i} and via {name_j} differ by {:e} (rank A = {rank_a}, partition ({n_x},{n_y}))",
                w_i.max_abs_diff(w_j)
            );
        }
    }
    Ok(())
}

fn variational<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);
    let rank_a = g.rng().int_in(0, n_x as i64) as usize;
    let (a, b) = g.positive_pair::<S>(n_x, n_y, rank_a).ctx("generator")?;
    // Positive type does not need a PSD corner.
    let d = if g.rng().chance(1, 2) {
        g.psd_any_rank(n_y)
    } else {
        HermitianMatrix::hermitian_part(&g.matrix::<S>(n_y, n_y))
    };
    let m = Block2::new(a, b, d).ctx("assembly")?;
    let (x1, x2, y) = (g.vector::<S>(n_x), g.vector::<S>(n_x), g.vector::<S>(n_y));
    let v1 = variational_value(&m, &x1, &y, tol).ctx("variational value")?;
    let v2 = variational_value(&m, &x2, &y, tol).ctx("variational value")?;
    let shorted = shorted_operator(&m, tol).ctx("shorted operator")?;
    let via_shorted = shorted.quadratic_form(&x1.vstack(&y)).re();
    if S::is_exact() {
        ensure!(v1 == via_shorted, "closed form {v1:?} differs from ⟨𝒮(𝐀)v,v⟩ = {via_shorted:?}");
        ensure!(v1 == v2, "closed form depends on x: {v1:?} vs {v2:?}");
        // Exact optimality certificate: the objective is convex in u = x − z
        // and its gradient A·u + B·y vanishes at u = −A⁺By.
        let x_sol = S::solve_oracle(m.a.matrix(), &(&m.b * &y)).ok_or("By ∉ ran A")?;
        let u = -&x_sol;
        ensure!((&(&*m.a * &u) + &(&m.b * &y)).is_zero(), "gradient does not vanish at the minimizer");
        let at_u = m.assembled().quadratic_form(&u.vstack(&y)).re();
        ensure!(at_u == v1, "objective at the elimination minimizer is {at_u:?}, closed form {v1:?}");
    } else {
        let (f1, f2, fs) = (v1.re_f64(), v2.re_f64(), via_shorted.re_f64());
        ensure!(
            (f1 - fs).abs() <= limits::VARIATIONAL_AGREEMENT,
            "closed form {f1} differs from ⟨𝒮(𝐀)v,v⟩ = {fs} by {:e}",
            (f1 - fs).abs()
        );
        ensure!(
            (f1 - f2).abs() < limits::VARIATIONAL_X_INDEPENDENCE,
            "closed form depends on x: {f1} vs {f2}"
        );
    }
    let block = Block2::new(
        HermitianMatrix::hermitian_part(&to_complex64(&m.a)),
        to_complex64(&m.b),
        HermitianMatrix::hermitian_part(&to_complex64(&m.d)),
    )
    .ctx("conversion")?;
    let brute = coordinate_descent_infimum(&block, &to_complex64(&x1), &to_complex64(&y), limits::DESCENT_SWEEPS);
    let closed = v1.re_f64();
    let gap = if S::is_exact() {
        // Rational instances have entries up to 10 with small denominators,
        // so the float descent is compared relative to the value.
        limits::DESCENT_GAP * (1.0 + closed.abs())
    } else {
        limits::DESCENT_GAP
    };
    ensure!(
        closed >= brute.value - gap,
        "closed form {closed} is above coordinate descent {} after {} sweeps",
        brute.value,
        brute.sweeps
    );
    ensure!(
        brute.value >= closed - gap,
        "coordinate descent {} went below the closed-form infimum {closed}",
        brute.value
    );
    Ok(())
}

fn quotient<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y, n_z) = (g.dim(), g.dim(), g.dim());
    let m = g.block3_psd::<S>(n_x, n_y, n_z);
    let report = quotient_formula_check(&m, tol).ctx("quotient check")?;
    ensure!(report.corner_matches, "𝐀/A is not the leading corner of 𝐃/A for ({n_x},{n_y},{n_z})");
    ensure!(report.identity_holds, "(𝐃/A)/(𝐀/A) ≠ 𝐃/𝐀 for ({n_x},{n_y},{n_z})");
    if let Some(d_over_a) = S::schur_oracle(&m.split_after_x()) {
        ensure!(*report.d_over_a == d_over_a, "𝐃/A differs from elimination");
        let a_over_a = S::schur_oracle(&m.leading()).ok_or("elimination failed on 𝐀")?;
        ensure!(*report.a_over_a == a_over_a, "𝐀/A differs from elimination");
        let direct = S::schur_oracle(&m.split_after_y()).ok_or("elimination failed on 𝐃")?;
        ensure!(*report.direct == direct, "𝐃/𝐀 differs from elimination");
        let inner = Block2::from_matrix(d_over_a, n_y).ctx("nested partition")?;
        let nested = S::schur_oracle(&inner).ok_or("elimination failed on 𝐃/A")?;
        ensure!(nested == direct, "elimination oracle violates the quotient identity");
    }
    Ok(())
}

fn order<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);
    let n = n_x + n_y;
    let m = g.block2_psd::<S>(n_x, n_y);
    let full = m.assembled();
    let result = schur_complement(&m, OmegaRoute::PseudoInverse, tol).ctx("σ")?;
    let s = result.operator();

    // 𝒮(𝐀) ≤ 𝐀 and ker 𝐀 ⊆ ker 𝒮(𝐀).
    let scale = full.frobenius_norm();
    ensure!(loewner_oracle(&s, &full, scale), "𝒮(𝐀) ≰ 𝐀");
    // 𝒮(𝐀) may vanish, so the inclusion is checked as 𝒮(𝐀)·K = 0 for a
    // kernel basis K of 𝐀 rather than by comparing numerical kernels.
    let leak = &*s * Subspace::kernel(&full, tol).basis();
    let kernels_nest = if S::is_exact() {
        leak.is_zero()
    } else {
        leak.max_abs() <= 1e-9 * (1.0 + full.max_abs())
    };
    ensure!(kernels_nest, "ker 𝐀 ⊄ ker 𝒮(𝐀): ‖𝒮(𝐀)K‖ = {:e}", leak.max_abs());

    // Monotonicity.
    let noise = g.psd_any_rank::<S>(n);
    let bigger = Block2::from_hermitian(&full.add(&noise), n_x).ctx("partition")?;
    let s_bigger = shorted_operator(&bigger, tol).ctx("𝒮(𝐀₁)")?;
    ensure!(loewner_oracle(&s, &s_bigger, bigger.assembled().frobenius_norm()), "𝐀 ≤ 𝐀₁ but 𝒮(𝐀) ≰ 𝒮(𝐀₁)");

    // Superadditivity.
    let other = g.block2_psd::<S>(n_x, n_y);
    let s_other = shorted_operator(&other, tol).ctx("𝒮(𝐀₂)")?;
    let sum = m.add(&other).ctx("sum")?;
    let s_sum = shorted_operator(&sum, tol).ctx("𝒮(𝐀₁+𝐀₂)")?;
    ensure!(loewner_oracle(&s.add(&s_other), &s_sum, sum.assembled().frobenius_norm()), "𝒮(𝐀₁)+𝒮(𝐀₂) ≰ 𝒮(𝐀₁+𝐀₂)");

    // Minimality of 𝐀_ex among PSD completions of (A, B).
    let ex = minimal_completion(&m.a, &m.b, tol).ctx("𝐀_ex")?;
    ensure!(S::psd_oracle(&ex.assembled(), full.frobenius_norm()), "𝐀_ex is not PSD");
    let lifted = m.d.add(&g.psd_any_rank::<S>(n_y));
    for d in [&m.d, &lifted] {
        let completion = Block2::new(m.a.clone(), m.b.clone(), d.clone()).ctx("completion")?;
        ensure!(S::psd_oracle(&completion.assembled(), full.frobenius_norm()), "generated completion is not PSD");
        ensure!(loewner_oracle(&ex.d, d, scale), "ω(A,B) ≰ D for a PSD completion");
    }

    // Maximality of 𝒮(𝐀) among diag(0, D₁) ≤ 𝐀.
    let below = result.sigma.sub(&g.psd_any_rank::<S>(n_y));
    let member = diag_zero(n_x, &below);
    ensure!(loewner_oracle(&member, &full, scale), "diag(0, σ − N) ≰ 𝐀");
    ensure!(loewner_oracle(&member, &s, scale), "diag(0, σ − N) ≰ 𝒮(𝐀)");
    let v = nonzero_vector::<S>(g, n_y);
    let eps: S = g.positive_real(0.05, 0.5);
    let above = diag_zero(n_x, &result.sigma.add(&HermitianMatrix::gram(&v.adjoint()).scale_real(&eps)));
    ensure!(!loewner_oracle(&above, &full, scale), "diag(0, σ + εvv*) ≤ 𝐀 contradicts maximality");

    // Positive type iff some diag(0, D₁) lies below a Hermitian 𝐀.
    let (h, kind) = g.block2_hermitian_kind::<S>(n_x, n_y);
    let h_full = h.assembled();
    let positive = matches!(check_positive_pair(&h.a, &h.b, tol), Ok(c) if c.positive);
    if positive {
        let sigma = schur_complement(&h, OmegaRoute::PseudoInverse, tol).ctx("σ of Hermitian instance")?.sigma;
        ensure!(loewner_oracle(&diag_zero(n_x, &sigma), &h_full, 0.0), "{kind:?}: diag(0, σ) ≰ 𝐀");
    } else {
        let c = S::from_f64((10.0 * (1.0 + h_full.frobenius_norm())).ceil());
        let far_below = h.d.sub(&HermitianMatrix::identity(n_y).scale_real(&c));
        ensure!(
            !loewner_oracle(&diag_zero(n_x, &far_below), &h_full, 0.0),
            "{kind:?}: not of positive type, yet diag(0, D − cI) ≤ 𝐀"
        );
    }
    Ok(())
}

fn douglas(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let n = g.dim();
    let r = g.rng().int_in(1, n as i64) as usize;
    let factor = g.matrix::<C>(r, n);
    let d = HermitianMatrix::gram(&factor);
    let k = g.rng().int_in(1, r as i64) as usize;
    let h = g.matrix::<C>(k, r);
    let h_norm = spectral_norm(&h);
    // ‖C‖ ≤ 1, so A = α²G*CG ≤ α²G*G = α²D.
    let contraction = HermitianMatrix::gram(&h).scale_real(&C::from_f64(1.0 / (h_norm * h_norm)));
    let alpha = 0.5 + 2.5 * g.rng().uniform();
    let a = contraction.congruence(&factor).scale_real(&C::from_f64(alpha * alpha));
    let f = douglas_factorization(&a, &d, alpha, tol).ctx("Douglas factorization")?;

    let residual = spectral_norm(&(&(&f.root_d.adjoint() * &f.w) - &f.root_a.adjoint()));
    ensure!(residual <= limits::DOUGLAS, "‖R_D*W − R_A*‖ = {residual:e}");
    ensure!(
        f.op_norm_w <= alpha + limits::DOUGLAS,
        "‖W‖ = {} exceeds α = {alpha}",
        f.op_norm_w
    );
    let r_a_adj = f.root_a.adjoint();
    let rank_w = rank(&f.w, tol);
    let rank_ra = rank(&r_a_adj, tol);
    ensure!(rank_w == rank_ra, "rank W = {rank_w} but rank R_A* = {rank_ra}");
    let same_kernel = Subspace::kernel(&f.w, tol)
        .equals(&Subspace::kernel(&r_a_adj, tol), tol)
        .ctx("kernels")?;
    ensure!(same_kernel, "ker W ≠ ker R_A*");
    let normal = douglas_factor_normal_equations(&f.root_a, &f.root_d).ctx("normal equations")?;
    ensure!(
        agree(&normal, &f.w, limits::DOUGLAS),
        "normal-equation W differs by {:e}",
        normal.max_abs_diff(&f.w)
    );
    Ok(())
}

fn ranges<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);
    let n = n_x + n_y;

    // ran 𝒮(𝐀) = ran 𝐀 ∩ Y′ for PSD 𝐀.
    let m = g.block2_psd::<S>(n_x, n_y);
    let full = m.assembled();
    let s = shorted_operator(&m, tol).ctx("𝒮(𝐀)")?;
    let y_prime = y_subspace::<S>(n_x, n_y);
    let range_s = Subspace::column_space_scaled(&s, full.frobenius_norm(), tol);
    let meet = Subspace::column_space(&full, tol).intersect(&y_prime, tol).ctx("intersection")?;
    ensure!(range_s.equals(&meet, tol).ctx("comparison")?, "ran 𝒮(𝐀) ≠ ran 𝐀 ∩ Y′");
    if let Some(rank_full) = S::rank_oracle(&full) {
        // dim(ran 𝐀 ∩ Y′) = rank 𝐀 − rank [A B], and ran 𝒮(𝐀) ⊆ ran 𝐀.
        let rank_top = S::rank_oracle(&full.submatrix(0, n_x, 0, n)).unwrap_or(0);
        let rank_s = S::rank_oracle(&s).unwrap_or(0);
        ensure!(rank_s == rank_full - rank_top, "rank 𝒮(𝐀) = {rank_s}, expected {rank_full} − {rank_top}");
        let joint = S::rank_oracle(&full.hstack(&s)).unwrap_or(0);
        ensure!(joint == rank_full, "ran 𝒮(𝐀) ⊄ ran 𝐀");
    }

    // ran 𝐀 ∩ Y′ ⊆ ran 𝒮(𝐀) for positive type with an indefinite corner.
    let rank_a = g.rng().int_in(0, n_x as i64) as usize;
    let (a, b) = g.positive_pair::<S>(n_x, n_y, rank_a).ctx("generator")?;
    let d = HermitianMatrix::hermitian_part(&g.matrix::<S>(n_y, n_y));
    let indefinite = Block2::new(a, b, d).ctx("assembly")?;
    let s_ind = shorted_operator(&indefinite, tol).ctx("𝒮 of positive type")?;
    let full_ind = indefinite.assembled();
    let meet_ind = Subspace::column_space(&full_ind, tol)
        .intersect(&y_prime, tol)
        .ctx("intersection")?;
    ensure!(
        Subspace::column_space_scaled(&s_ind, full_ind.frobenius_norm(), tol).contains(&meet_ind, tol).ctx("inclusion")?,
        "ran 𝐀 ∩ Y′ ⊄ ran 𝒮(𝐀) for a positive-type 𝐀"
    );

    // ran (R₁*R₁ + R₂*R₂) = ran R₁* + ran R₂*.
    let factor = |g: &mut Generator| {
        let rows = g.rng().int_in(1, n as i64) as usize;
        let inner = g.rng().int_in(1, n as i64) as usize;
        if g.rng().chance(1, 2) {
            g.matrix::<S>(rows, n)
        } else {
            &g.matrix::<S>(rows, inner) * &g.matrix::<S>(inner, n)
        }
    };
    let r1 = factor(g);
    let r2 = factor(g);
    let report = verify_range_additivity(&r1, &r2, tol).ctx("range additivity")?;
    ensure!(report.holds, "ran R₁* + ran R₂* ≠ ran R*");
    let sum = HermitianMatrix::gram(&r1).add(&HermitianMatrix::gram(&r2));
    if let Some(rank_sum) = S::rank_oracle(&sum) {
        let adjoints = r1.adjoint().hstack(&r2.adjoint());
        let rank_adj = S::rank_oracle(&adjoints).unwrap_or(0);
        let joint = S::rank_oracle(&sum.hstack(&adjoints)).unwrap_or(0);
        ensure!(
            rank_sum == rank_adj && joint == rank_sum,
            "rank oracle: rank A = {rank_sum}, rank [R₁* R₂*] = {rank_adj}, joint {joint}"
        );
    }
    Ok(())
}

fn doubly_extremal_consistency<S: PsdOracle>(m: &Block2<S>, is_doubly: bool, h1_dim: Option<usize>, tol: &ToleranceProfile) -> Check {
    let kernels = kernel_equality_check(&m.a, &m.b, tol).ctx("kernel equality")?;
    ensure!(
        kernels.kernels_equal == is_doubly,
        "doubly extremal = {is_doubly} but ker A = ker B* is {}",
        kernels.kernels_equal
    );
    if let Some(dim) = h1_dim {
        ensure!((dim == 0) == is_doubly, "doubly extremal = {is_doubly} but dim H₁ = {dim}");
    }
    if let (Some(rank_a), Some(rank_b)) = (S::rank_oracle(&m.a), S::rank_oracle(&m.b.adjoint())) {
        // ran B ⊆ ran A, so the kernels agree iff the ranks do.
        ensure!((rank_a == rank_b) == is_doubly, "rank oracle: rank A = {rank_a}, rank B = {rank_b}, doubly = {is_doubly}");
    }
    let w = omega(&m.a, &m.b, tol).ctx("ω")?;
    let w3 = triple_omega(&m.a, &m.b, tol).ctx("triple ω")?;
    ensure!(
        agree(&w3, &w, EXTREMAL_TOLERANCE),
        "ω(ω(ω(A,B),B*),B) differs from ω(A,B) by {:e}",
        w3.max_abs_diff(&w)
    );
    Ok(())
}

fn extremal<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);

    let ex = g.block2_extremal::<S>(n_x, n_y);
    let report = extremality_criteria(&ex, tol).ctx("criteria on 𝐀_ex")?;
    ensure!(
        report.sigma_vanishes
            && report.infimum_vanishes
            && report.range_meets_y_trivially
            && report.root_ranges_coincide != Some(false),
        "criteria on 𝐀_ex: σ = 0 {}, infimum {}, (R·X) = ran R {:?}, ran 𝐀 ∩ Y′ = 0 {}",
        report.sigma_vanishes,
        report.infimum_vanishes,
        report.root_ranges_coincide,
        report.range_meets_y_trivially
    );
    doubly_extremal_consistency(&ex, report.is_doubly_extremal, report.h1_dim, tol)?;

    // Non-extremal control: a fresh completion with a nonzero σ added.
    let base = g.block2_extremal::<S>(n_x, n_y);
    let v = nonzero_vector::<S>(g, n_y);
    let sigma = HermitianMatrix::gram(&v.adjoint());
    let control = Block2::new(base.a.clone(), base.b.clone(), base.d.add(&sigma)).ctx("control")?;
    let report = extremality_criteria(&control, tol).ctx("criteria on control")?;
    ensure!(
        report.criteria_agree() && !report.is_extremal,
        "criteria on control: σ = 0 {}, infimum {}, (R·X) = ran R {:?}, ran 𝐀 ∩ Y′ = 0 {}",
        report.sigma_vanishes,
        report.infimum_vanishes,
        report.root_ranges_coincide,
        report.range_meets_y_trivially
    );
    doubly_extremal_consistency(&control, report.is_doubly_extremal, report.h1_dim, tol)?;

    // 𝐀 = 𝒮(𝐀) + 𝐀_ex.
    let s = shorted_operator(&control, tol).ctx("𝒮 of control")?;
    let ex_of_control = minimal_completion(&control.a, &control.b, tol).ctx("𝐀_ex of control")?;
    ensure!(
        agree(&s.add(&ex_of_control.assembled()), &control.assembled(), EXTREMAL_TOLERANCE),
        "𝒮(𝐀) + 𝐀_ex ≠ 𝐀"
    );

    // ran B = ran A forces double extremality.
    let a = g.psd_any_rank::<S>(n_x);
    let u = g.full_rank_matrix::<S>(n_x, n_x);
    let b = &*a * &u;
    ensure!(
        is_doubly_extremal(&a, &b, tol).ctx("ran B = ran A")?,
        "ran B = ran A but the pair is not doubly extremal"
    );
    Ok(())
}

fn infimum<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);
    let n = n_x + n_y;
    let (chain, limit) = g.decreasing_chain::<S>(limits::CHAIN_LENGTH, n_x, n_y);
    let s0 = shorted_operator(&limit, tol).ctx("𝒮(limit)")?;
    let rows = g.rng().int_in(1, n as i64) as usize;
    let gram = HermitianMatrix::gram(&g.matrix::<S>(rows, n));
    let c = S::from_f64((1.0 + gram.frobenius_norm()).ceil());
    let bounds = [
        s0.sub(&gram),
        HermitianMatrix::identity(n).scale_real(&(-c)),
        s0.clone(),
    ];
    let report = infimum_of_chain(&chain, &limit, &bounds, tol).ctx("infimum")?;
    let scale = chain[0].assembled().frobenius_norm();
    ensure!(report.limit_positive_type, "PSD limit reported outside 𝓛⁺");
    ensure!(report.limit_below_chain == Some(true), "𝒮(limit) ≰ 𝒮(𝐀ₙ) for some n");
    for (i, lb) in report.lower_bounds.iter().enumerate() {
        ensure!(lb.bounds_chain, "constructed lower bound {i} does not bound the chain");
        ensure!(lb.below_limit == Some(true), "constructed lower bound {i} is not below 𝒮(limit)");
    }
    ensure!(report.consistent(), "inconsistent infimum report");
    let shorted: Vec<_> = report.chain_shorted.iter().flatten().collect();
    ensure!(shorted.len() == chain.len(), "a chain member lost positive type");
    for (k, s) in shorted.iter().enumerate() {
        ensure!(loewner_oracle(&s0, s, scale), "oracle: 𝒮(limit) ≰ 𝒮(𝐀_{})", k + 1);
    }
    for (k, pair) in shorted.windows(2).enumerate() {
        ensure!(loewner_oracle(pair[1], pair[0], scale), "oracle: 𝒮(𝐀_{}) ≰ 𝒮(𝐀_{})", k + 2, k + 1);
    }
    Ok(())
}

fn unbounded_chain<S: PsdOracle>(g: &mut Generator, tol: &ToleranceProfile) -> Check {
    let (n_x, n_y) = proper_split(g);
    let (chain, limit) = g
        .decreasing_chain_unbounded::<S>(limits::CHAIN_LENGTH, n_x, n_y)
        .ctx("generator")?;
    let report = infimum_of_chain(&chain, &limit, &[], tol).ctx("infimum")?;
    ensure!(!report.limit_positive_type, "limit with ran B ⊄ ran A reported in 𝓛⁺");
    let mins: Vec<f64> = report.shorted_min_eigenvalues.iter().flatten().copied().collect();
    ensure!(mins.len() == chain.len(), "a chain member lost positive type");
    for (k, pair) in mins.windows(2).enumerate() {
        ensure!(
            pair[1] <= pair[0] + 1e-9 * (1.0 + pair[0].abs()),
            "λ_min 𝒮(𝐀ₙ) increased from {} to {} at n = {}",
            pair[0],
            pair[1],
            k + 2
        );
    }
    ensure!(
        mins[mins.len() - 1] < mins[0],
        "λ_min 𝒮(𝐀ₙ) did not decrease along the chain ({} → {})",
        mins[0],
        mins[mins.len() - 1]
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn square_root_suites_refuse_the_exact_backend() {
        let tol = ToleranceProfile::default();
        assert!(run_suite(Suite::Douglas, Backend::Rational, 1, 0, &tol).is_err());
        assert!(run_suite(Suite::SqrtIndependence, Backend::Rational, 1, 0, &tol).is_err());
    }

    #[test]
    fn small_runs_pass_on_both_backends() {
        let tol = ToleranceProfile::default();
        for suite in Suite::ALL {
            for backend in [Backend::Float, Backend::Rational] {
                if !suite.supports(backend) {
                    continue;
                }
                let report = run_suite(suite, backend, 8, 11, &tol).unwrap();
                assert!(report.all_passed(), "{suite} on {backend}: {:?}", report.failures);
                assert_eq!(report.summary(), "8/8 pass");
            }
        }
    }

    #[test]
    fn reports_do_not_depend_on_scheduling() {
        let tol = ToleranceProfile::default();
        let a = run_suite(Suite::Albert, Backend::Float, 40, 5, &tol).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_suite(Suite::Albert, Backend::Float, 40, 5, &tol).unwrap());
        assert_eq!(a, b);
    }
}
