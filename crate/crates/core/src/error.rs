//! Error type shared across the crate.

use crate::roots::Root;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("block sizes must be nonempty")]
    EmptyInput,
    #[error("block sizes must be positive, got {0}")]
    NonPositive(i64),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("certificate failure for root {root}: {reason}")]
    CertificateFailure { root: Root, reason: String },
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("determinant size {0} exceeds cap {1}")]
    SizeCap(usize, usize),
    #[error("variable {0} missing from point")]
    MissingVariable(Root),
    #[error("pair ({0}, {1}) is not admissible")]
    NotAdmissible(Root, Root),
    #[error("missing witness for {root}: {reason}")]
    MissingWitness { root: Root, reason: String },
    #[error("case flag disagrees with block data for {0}")]
    CaseMismatch(Root),
    #[error("denominator vanishes identically under restriction")]
    VanishingDenominator,
    #[error("zero denominator polynomial")]
    ZeroDenominator,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("slice coefficient at {0} must be nonzero")]
    ZeroCoefficient(Root),
    #[error("support mismatch: {0}")]
    WrongSupport(String),
    #[error("point is not in the Y slice: {0}")]
    NotYPoint(String),
    #[error("bad matrix indices ({0}, {1})")]
    BadIndices(u32, u32),
    #[error("torus entry {0} is zero")]
    ZeroDiagonal(usize),
    #[error("adjoint action leaks outside the nilradical at ({0}, {1})")]
    SupportLeak(u32, u32),
    #[error("division by zero while solving for {0}")]
    DivisionByZero(Root),
    #[error("missing invariant value for {0}")]
    MissingValue(Root),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
