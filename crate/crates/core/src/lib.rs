//! Generalized Schur complements and shorted operators of Hermitian
//! positive-semidefinite block matrices.
//!
//! Everything is generic over a [`Scalar`] field with two backends:
//! complex binary64 ([`Complex64`]) and exact Gaussian rationals
//! ([`GaussianRational`]). Quantities that are defined through square roots
//! (`ω`, `σ`, the shorted operator, extremality) also have square-root-free
//! pseudo-inverse formulations, which is what the exact backend evaluates.
//!
//! Module map:
//!
//! - [`kernel`]: rank factorizations, pseudo-inverses, subspaces, Loewner order
//! - [`sqrt`]: square roots `A = R*R` and the factorization lemmas on them
//! - [`pair`]: positive pairs and `ω(A,B)`
//! - [`schur`]: Schur complements, shorted operators, Albert classification
//! - [`extremal`]: extremal and doubly extremal block matrices
//! - [`generators`]: seeded instance streams
//! - [`verify`]: property suites over generated instances

pub mod error;
pub mod extremal;
pub mod generators;
pub mod kernel;
pub mod matrix;
pub mod pair;
pub mod scalar;
pub mod schur;
pub mod sqrt;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{HermitianMatrix, Subspace, ToleranceProfile};
pub use matrix::Matrix;
pub use scalar::{Backend, Complex64, GaussianRational, Scalar};
