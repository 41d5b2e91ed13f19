use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows but row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("{labels} labels supplied for a {size}x{size} matrix")]
    LabelCount { labels: usize, size: usize },

    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),

    #[error("diagonal entry A[{index}][{index}] = {value}, expected 2")]
    NonTwoDiagonal { index: usize, value: i64 },

    #[error("off-diagonal entry A[{row}][{col}] = {value} is positive")]
    PositiveOffDiagonal { row: usize, col: usize, value: i64 },

    #[error("A[{row}][{col}] = 0 but A[{col}][{row}] != 0")]
    AsymmetricZero { row: usize, col: usize },

    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: usize, rank: usize },

    #[error("resource budget exceeded: {what} passed the cap of {cap}")]
    ResourceBudgetExceeded { what: &'static str, cap: usize },

    #[error("chamber lies on the wall of the root (internal error)")]
    WallIncidence,

    #[error("vector {0} is not a real root")]
    NotARoot(String),

    #[error("roots do not form a prenilpotent pair")]
    NotPrenilpotent,

    #[error("prenilpotence could not be resolved within radius {0}")]
    Unresolved(usize),

    #[error("degenerate segment: {0}")]
    DegenerateSegment(String),

    #[error("the Levi factor is non-trivial ({0} roots in the wall set)")]
    NonEmptyLeviPart(usize),

    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),

    #[error("degree budget exceeded: exponent {exponent} beyond cap {cap}")]
    DegreeBudgetExceeded { exponent: i64, cap: i64 },

    #[error("unsupported matrix size {0} (only 2 and 3)")]
    UnsupportedSize(usize),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("automorphism does not preserve the matrix: A[{s}][{t}] != A[pi({s})][pi({t})]")]
    InvarianceViolation { s: usize, t: usize },

    #[error("root datum pairing <c_{s}, h_{t}> differs from A[{t}][{s}]")]
    PairingMismatch { s: usize, t: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("unsupported orbit {orbit:?}: {reason}")]
    UnsupportedOrbit { orbit: Vec<usize>, reason: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a size or degree cap rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ResourceBudgetExceeded { .. } | Error::DegreeBudgetExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
