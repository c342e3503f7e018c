//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrices must have at least one row and one column.
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    /// NaN or infinity found while constructing a matrix.
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols} ({context})")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
        context: &'static str,
    },

    #[error("{context} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        rows: usize,
        cols: usize,
        context: &'static str,
    },

    /// Input is singular at the working rank tolerance.
    #[error("matrix is rank-deficient at the rank tolerance (sigma_min = {sigma_min:e}); {context}")]
    RankDeficient { sigma_min: f64, context: String },

    #[error("SVD iteration failed to converge")]
    SvdConvergence,

    #[error("eigenvalue (Schur) iteration failed to converge")]
    EigConvergence,

    /// Principal square root undefined: spectrum touches the negative real axis.
    #[error("branch cut: eigenvalue {eigenvalue} {context}")]
    BranchCut {
        eigenvalue: Complex64,
        context: String,
    },

    /// The unscaled sum form only admits real solutions for d >= 2.
    #[error("sum form infeasible: requires a value >= 2, got {d}; the real solution does not exist")]
    InfeasibleSum { d: f64 },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("infeasible ensemble spec: {0}")]
    InvalidEnsemble(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numeric post-condition failed (residual above tolerance, snap-back
    /// impossible, defective square root, ...). Never silent garbage.
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
