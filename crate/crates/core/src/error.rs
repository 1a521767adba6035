//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument fell outside its documented domain.
    #[error("{name} = {value} out of range ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A covariance matrix failed the physicality check at construction.
    #[error("unphysical two-mode covariance: nu_minus = {nu_minus}")]
    Unphysical { nu_minus: f64 },

    /// A caller violated a documented operating-regime restriction.
    #[error("contract violation: {0}")]
    Contract(&'static str),

    /// An adaptive truncation hit its hard cap before reaching the tail bound.
    #[error("truncation cap {cap} reached with tail mass {tail:.3e}")]
    TruncationCap { cap: usize, tail: f64 },

    /// A Fock-basis table was requested with too small a cutoff.
    #[error("Fock truncation at n_max = {n_max} leaves tail mass {tail:.3e}")]
    FockTail { n_max: usize, tail: f64 },

    /// Hypothesis count exceeds the configured enumeration cap.
    #[error("{count} hypotheses exceed the cap of {cap}")]
    HypothesisCap { count: u128, cap: u64 },

    /// Mismatched vector lengths in an experiment configuration.
    #[error("configuration shape error: {0}")]
    Shape(String),

    /// An iterative numerical routine failed to converge.
    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    /// CSV input rejected, with the offending location.
    #[error("parse error at row {row}, column {col}: {message}")]
    Parse {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
