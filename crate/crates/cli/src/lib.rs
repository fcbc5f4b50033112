//! Command-line front end: JSON matrix documents in, JSON reports out.

pub mod commands;
pub mod document;
pub mod exit;

pub use commands::{run, Cli};
pub use document::{AnyMatrix, Codec, MatrixDocument};
pub use exit::CliError;
