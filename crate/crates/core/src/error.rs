use thiserror::Error;

/// Errors produced by state validation and the quantifier computations.
///
/// Validation errors name the violated invariant and carry the numerical
/// residual so that callers (and the CLI) can report exactly what failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("not Hermitian: max |A[j,k] - conj(A[k,j])| = {residual:.3e} exceeds {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("not positive semi-definite: min eigenvalue {eigenvalue:.3e}")]
    NotPsd { eigenvalue: f64 },

    #[error("trace must be 1: |trace - 1| = {residual:.3e}")]
    TraceNotOne { residual: f64 },

    #[error("diagonal entry {index} outside [0, 1]: {value:.6e}")]
    DiagonalOutOfRange { index: usize, value: f64 },

    #[error("vector is not normalized: |norm - 1| = {residual:.3e}")]
    NotNormalized { residual: f64 },

    #[error(
        "detector Gram matrix must have unit diagonal: |G[{index},{index}] - 1| = {residual:.3e}"
    )]
    GramDiagonalNotUnit { index: usize, residual: f64 },

    #[error("unphysical detector: Gram matrix not positive semi-definite, min eigenvalue {eigenvalue:.3e}")]
    UnphysicalDetector { eigenvalue: f64 },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps: off-diagonal residual {residual:.3e}"
    )]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("rank {rank} invalid for dimension {dim} (need 1 <= rank <= dim)")]
    InvalidRank { rank: usize, dim: usize },

    #[error("{what} should be nonnegative but evaluated to {value:.3e}")]
    NegativeQuantity { what: &'static str, value: f64 },

    #[error("internal consistency check failed for {what}: residual {residual:.3e}")]
    Inconsistent { what: &'static str, residual: f64 },

    #[error("unknown quantifier id: {0}")]
    UnknownQuantifier(String),

    #[error("state does not match a reduced state of the supplied ket: residual {residual:.3e}")]
    StateKetMismatch { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Clamp a quantity that is nonnegative in exact arithmetic.
///
/// Values in `[floor, 0)` are rounding noise and become 0; anything below
/// `floor` indicates a genuine inconsistency and is surfaced as an error.
pub(crate) fn clamp_nonneg(value: f64, floor: f64, what: &'static str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= floor {
        Ok(0.0)
    } else {
        Err(Error::NegativeQuantity { what, value })
    }
}
