//! Subcommands. Each reads documents, calls into the library, and returns
//! the text for standard output together with the exit code.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shorted::extremal::{extremality_criteria, kernel_equality_check};
use shorted::generators::{GenConfig, Generator};
use shorted::kernel::spectral_norm;
use shorted::pair::{check_positive_pair, omega};
use shorted::schur::{albert_classify, quotient_formula_check, schur_complement, AlbertClass, Block2, Block3};
use shorted::sqrt::douglas_factorization;
use shorted::verify::{run_suite, Suite};
use shorted::{Backend, Complex64, GaussianRational, HermitianMatrix, ToleranceProfile};

use crate::document::{AnyMatrix, Codec, MatrixDocument};
use crate::exit::{self, CliError};

#[derive(Parser, Debug)]
#[command(name = "shorted", version, about = "Generalized Schur complements and shorted operators")]
pub struct Cli {
    /// Arithmetic to use; defaults to the input document's backend (float for gen and verify).
    #[arg(long, global = true)]
    pub backend: Option<Backend>,
    /// Relative singular-value threshold for float rank decisions.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// σ = D − ω(A,B) and the shorted operator diag(0, σ).
    Schur {
        /// Block2 document with a two-part partition, or - for stdin.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Pinv)]
        route: Route,
    },
    /// PSD, NOT_POSITIVE_TYPE (exit 2) or SIGMA_NOT_PSD (exit 3).
    Albert { input: PathBuf },
    /// Extremality criteria, double ω and kernel equality.
    Extremal { input: PathBuf },
    /// Whether (A, B) of a Block2 document is a positive pair.
    PairCheck { input: PathBuf },
    /// W with R_A* = R_D*·W, given A ≤ α²D. Float only.
    Douglas {
        a: PathBuf,
        d: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Nested Schur complements of a three-part Block3 document.
    Quotient { input: PathBuf },
    /// Print a generated instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, env = "SHORTED_SEED", default_value_t = 0)]
        seed: u64,
        /// Comma-separated block sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Rank for --kind psd; defaults to full.
        #[arg(long)]
        rank: Option<usize>,
        /// Chain length for --kind chain.
        #[arg(long, default_value_t = 5)]
        len: usize,
    },
    /// Run a property suite and print "passed/count pass".
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, env = "SHORTED_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// ω = B*A⁺B.
    Pinv,
    /// ω = T*T from a minimal square root. Float only.
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Psd,
    Block2Psd,
    Block2Hermitian,
    Block2Extremal,
    Block3Psd,
    Chain,
}

/// What a successful run prints, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: exit::OK,
        }
    }

    fn json(v: Value, code: i32) -> Self {
        Outcome {
            stdout: v.to_string(),
            stderr: String::new(),
            code,
        }
    }
}

fn read_document(path: &Path) -> Result<MatrixDocument, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::parse(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("reading {}: {e}", path.display())))?;
    }
    MatrixDocument::parse(&text)
}

fn tolerance(tol: Option<f64>) -> Result<ToleranceProfile, CliError> {
    let profile = ToleranceProfile::default();
    match tol {
        None => Ok(profile),
        Some(t) if t.is_finite() && t > 0.0 && t < 1.0 => Ok(profile.with_rank_threshold(t)),
        Some(t) => Err(CliError::validation(format!("--tol must lie in (0, 1), got {t}"))),
    }
}

fn doc_value<S: Codec>(m: &HermitianMatrix<S>, partition: Option<Vec<usize>>) -> Value {
    serde_json::to_value(MatrixDocument::from_hermitian(m, partition)).expect("documents serialize")
}

fn hermitian<S: Codec>(m: &AnyMatrix) -> Result<HermitianMatrix<S>, CliError> {
    Ok(HermitianMatrix::new(S::from_any(m))?)
}

fn block2<S: Codec>(doc: &MatrixDocument, m: &AnyMatrix) -> Result<Block2<S>, CliError> {
    let Some(&[n_x, _]) = doc.partition.as_deref() else {
        return Err(CliError::validation("a two-part partition [n_X, n_Y] is required"));
    };
    Ok(Block2::from_hermitian(&hermitian::<S>(m)?, n_x)?)
}

fn partition_of<S: Codec>(m: &Block2<S>) -> Option<Vec<usize>> {
    let (n_x, n_y) = m.partition();
    Some(vec![n_x, n_y])
}

fn schur<S: Codec>(doc: &MatrixDocument, m: &AnyMatrix, route: Route, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let block = block2::<S>(doc, m)?;
    let route = match route {
        Route::Pinv => shorted::pair::OmegaRoute::PseudoInverse,
        Route::Sqrt => shorted::pair::OmegaRoute::SquareRoot,
    };
    let result = schur_complement(&block, route, tol)?;
    Ok(Outcome::json(
        json!({
            "sigma": doc_value(&result.sigma, None),
            "shorted": doc_value(&result.operator(), partition_of(&block)),
            "positive_type": result.positive_type,
        }),
        exit::OK,
    ))
}

fn albert<S: Codec>(doc: &MatrixDocument, m: &AnyMatrix, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let block = block2::<S>(doc, m)?;
    let verdict = albert_classify(&block, tol);
    let mut stdout = verdict.classification.label().to_string();
    if let Some(sigma) = &verdict.sigma {
        stdout.push('\n');
        stdout.push_str(&MatrixDocument::from_hermitian(sigma, None).to_json());
    }
    let code = match verdict.classification {
        AlbertClass::Psd => exit::OK,
        AlbertClass::NotPositiveType => exit::POSITIVITY,
        AlbertClass::SigmaNotPsd => exit::SIGMA_INDEFINITE,
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code,
    })
}

fn extremal<S: Codec>(doc: &MatrixDocument, m: &AnyMatrix, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let block = block2::<S>(doc, m)?;
    let report = extremality_criteria(&block, tol)?;
    let kernels = kernel_equality_check(&block.a, &block.b, tol)?;
    let agree = report.criteria_agree() && kernels.equivalence_holds();
    let value = json!({
        "is_extremal": report.is_extremal,
        "criteria": {
            "sigma_vanishes": report.sigma_vanishes,
            "infimum_vanishes": report.infimum_vanishes,
            "root_ranges_coincide": report.root_ranges_coincide,
            "range_meets_y_trivially": report.range_meets_y_trivially,
        },
        "criteria_agree": agree,
        "is_doubly_extremal": report.is_doubly_extremal,
        "double_omega": doc_value(&report.double_omega, None),
        "h1_dim": report.h1_dim,
        "kernels_equal": kernels.kernels_equal,
    });
    if !agree {
        return Err(CliError::new(exit::INTERNAL, format!("extremality criteria disagree: {value}")));
    }
    Ok(Outcome::json(value, exit::OK))
}

fn pair_check<S: Codec>(doc: &MatrixDocument, m: &AnyMatrix, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let block = block2::<S>(doc, m)?;
    let check = check_positive_pair(&block.a, &block.b, tol)?;
    let omega_doc = if check.positive {
        Some(doc_value(&omega(&block.a, &block.b, tol)?, None))
    } else {
        None
    };
    let d = &check.diagnostic;
    let value = json!({
        "positive": check.positive,
        "kernel_condition": d.kernel_condition,
        "sup_condition": d.sup_condition,
        "sup_on_basis": d.sup_on_basis,
        "diagnostic": d.to_string(),
        "omega": omega_doc,
    });
    let code = if check.positive { exit::OK } else { exit::POSITIVITY };
    Ok(Outcome::json(value, code))
}

fn douglas<S: Codec>(a: &AnyMatrix, d: &AnyMatrix, alpha: f64, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let (a, d) = (hermitian::<S>(a)?, hermitian::<S>(d)?);
    let f = douglas_factorization(&a, &d, alpha, tol)?;
    let residual = spectral_norm(&(&(&f.root_d.adjoint() * &f.w) - &f.root_a.adjoint()));
    let w = serde_json::to_value(MatrixDocument::from_matrix(&f.w, None)).expect("documents serialize");
    Ok(Outcome::json(
        json!({ "w": w, "alpha": alpha, "op_norm_w": f.op_norm_w, "residual": residual }),
        exit::OK,
    ))
}

fn quotient<S: Codec>(doc: &MatrixDocument, m: &AnyMatrix, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let Some(&[n_x, n_y, n_z]) = doc.partition.as_deref() else {
        return Err(CliError::validation("a three-part partition [n_X, n_Y, n_Z] is required"));
    };
    let block = Block3::from_hermitian(&hermitian::<S>(m)?, (n_x, n_y, n_z))?;
    let report = quotient_formula_check(&block, tol)?;
    let value = json!({
        "d_over_a": doc_value(&report.d_over_a, Some(vec![n_y, n_z])),
        "a_over_a": doc_value(&report.a_over_a, None),
        "corner_matches": report.corner_matches,
        "nested": doc_value(&report.nested, None),
        "direct": doc_value(&report.direct, None),
        "identity_holds": report.identity_holds,
    });
    if !report.holds() {
        return Err(CliError::new(exit::INTERNAL, format!("quotient identity fails: {value}")));
    }
    Ok(Outcome::json(value, exit::OK))
}

fn generate<S: Codec>(kind: Kind, seed: u64, dims: &[usize], rank: Option<usize>, len: usize) -> Result<Outcome, CliError> {
    let mut g = Generator::new(GenConfig::new(seed, S::BACKEND));
    let want = |n: usize| {
        if dims.len() == n {
            Ok(())
        } else {
            Err(CliError::validation(format!("--kind {kind:?} takes {n} dimension(s), got {dims:?}")))
        }
    };
    let block_doc = |m: &Block2<S>| MatrixDocument::from_hermitian(&m.assembled(), partition_of(m)).to_json();
    let text = match kind {
        Kind::Psd => {
            want(1)?;
            let m = g.psd::<S>(dims[0], rank.unwrap_or(dims[0]))?;
            MatrixDocument::from_hermitian(&m, None).to_json()
        }
        Kind::Block2Psd => {
            want(2)?;
            block_doc(&g.block2_psd(dims[0], dims[1]))
        }
        Kind::Block2Hermitian => {
            want(2)?;
            block_doc(&g.block2_hermitian(dims[0], dims[1]))
        }
        Kind::Block2Extremal => {
            want(2)?;
            block_doc(&g.block2_extremal(dims[0], dims[1]))
        }
        Kind::Block3Psd => {
            want(3)?;
            let m = g.block3_psd::<S>(dims[0], dims[1], dims[2]);
            MatrixDocument::from_hermitian(&m.assembled(), Some(dims.to_vec())).to_json()
        }
        Kind::Chain => {
            want(2)?;
            let (chain, limit) = g.decreasing_chain::<S>(len, dims[0], dims[1]);
            let doc = |m: &Block2<S>| serde_json::to_value(MatrixDocument::from_hermitian(&m.assembled(), partition_of(m)));
            let chain: Vec<Value> = chain.iter().map(|m| doc(m).expect("documents serialize")).collect();
            json!({ "chain": chain, "limit": doc(&limit).expect("documents serialize") }).to_string()
        }
    };
    Ok(Outcome::ok(text))
}

fn verify(suite: Suite, backend: Backend, count: usize, seed: u64, tol: &ToleranceProfile) -> Result<Outcome, CliError> {
    let report = run_suite(suite, backend, count, seed, tol)?;
    let stderr = report
        .failures
        .iter()
        .map(|f| format!("instance {}: {}\n", f.index, f.message))
        .collect();
    let code = if report.all_passed() { exit::OK } else { exit::INTERNAL };
    Ok(Outcome {
        stdout: report.summary(),
        stderr,
        code,
    })
}

/// Dispatch a documented command on the backend it asks for.
macro_rules! on_backend {
    ($backend:expr, $f:ident ( $($arg:expr),* )) => {
        match $backend {
            Backend::Float => $f::<Complex64>($($arg),*),
            Backend::Rational => $f::<GaussianRational>($($arg),*),
        }
    };
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let tol = tolerance(cli.tol)?;
    let single = |path: &Path| -> Result<(MatrixDocument, AnyMatrix, Backend), CliError> {
        let doc = read_document(path)?;
        let m = doc.matrix()?;
        let backend = cli.backend.unwrap_or(m.backend());
        Ok((doc, m, backend))
    };
    match cli.command {
        Command::Schur { ref input, route } => {
            let (doc, m, b) = single(input)?;
            on_backend!(b, schur(&doc, &m, route, &tol))
        }
        Command::Albert { ref input } => {
            let (doc, m, b) = single(input)?;
            on_backend!(b, albert(&doc, &m, &tol))
        }
        Command::Extremal { ref input } => {
            let (doc, m, b) = single(input)?;
            on_backend!(b, extremal(&doc, &m, &tol))
        }
        Command::PairCheck { ref input } => {
            let (doc, m, b) = single(input)?;
            on_backend!(b, pair_check(&doc, &m, &tol))
        }
        Command::Douglas { ref a, ref d, alpha } => {
            let (_, a, b) = single(a)?;
            let (_, d, _) = single(d)?;
            on_backend!(b, douglas(&a, &d, alpha, &tol))
        }
        Command::Quotient { ref input } => {
            let (doc, m, b) = single(input)?;
            on_backend!(b, quotient(&doc, &m, &tol))
        }
        Command::Gen {
            kind,
            seed,
            ref dims,
            rank,
            len,
        } => on_backend!(cli.backend.unwrap_or(Backend::Float), generate(kind, seed, dims, rank, len)),
        Command::Verify { suite, count, seed } => {
            verify(suite, cli.backend.unwrap_or(Backend::Float), count, seed, &tol)
        }
    }
}
